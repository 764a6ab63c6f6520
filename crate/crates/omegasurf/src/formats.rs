//! CSV and OBJ readers and writers.
//!
//! Every number is written with 17 significant digits so that values survive
//! a round trip exactly.

use std::io::{BufRead, Write};

use omegasurf_core::surface::{Polyline, SurfaceMesh};
use omegasurf_core::{Point3, Vec3};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Points from `x,y,z` rows. A first row that does not parse as numbers is
/// taken as a header.
pub fn read_points_csv(input: impl std::io::Read) -> Result<Vec<Point3>, FormatError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .flexible(true)
        .from_reader(input);
    let mut out = Vec::new();
    for (k, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = rec.position().map_or(k + 1, |p| p.line() as usize);
        let vals: Result<Vec<f64>, _> = rec.iter().take(3).map(str::parse::<f64>).collect();
        match vals {
            Ok(v) if v.len() == 3 && v.iter().all(|x| x.is_finite()) => out.push(Vec3::new(v[0], v[1], v[2])),
            Ok(v) if v.len() == 3 => {
                return Err(FormatError::Syntax { line, message: "non-finite coordinate".into() })
            }
            Err(_) if k == 0 => continue,
            _ => return Err(FormatError::Syntax { line, message: "expected x,y,z".into() }),
        }
    }
    Ok(out)
}

/// Writes a header and rows of preformatted fields.
pub fn write_csv<W: Write>(out: W, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<(), FormatError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.flush()?;
    Ok(())
}

fn write_vertices<W: Write>(out: &mut W, pts: &[Point3]) -> std::io::Result<()> {
    for p in pts {
        writeln!(out, "v {} {} {}", num(p.x), num(p.y), num(p.z))?;
    }
    Ok(())
}

pub fn write_obj_mesh<W: Write>(mut out: W, mesh: &SurfaceMesh) -> std::io::Result<()> {
    write_vertices(&mut out, &mesh.vertices)?;
    for f in &mesh.faces {
        writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1)?;
    }
    out.flush()
}

/// One `l` record per polyline, vertices numbered consecutively.
pub fn write_obj_polylines<W: Write>(mut out: W, lines: &[Polyline]) -> std::io::Result<()> {
    let mut base = 1;
    for line in lines {
        write_vertices(&mut out, line)?;
        let ids: Vec<String> = (base..base + line.len()).map(|i| i.to_string()).collect();
        if line.len() >= 2 {
            writeln!(out, "l {}", ids.join(" "))?;
        }
        base += line.len();
    }
    out.flush()
}

/// Vertices, triangles and polylines of an OBJ file. Polygons with more
/// than three corners are fan-triangulated; texture and normal indices are
/// ignored.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ObjData {
    pub vertices: Vec<Point3>,
    pub faces: Vec<[usize; 3]>,
    pub lines: Vec<Vec<usize>>,
}

impl ObjData {
    pub fn into_mesh(self) -> Result<SurfaceMesh, omegasurf_core::Error> {
        SurfaceMesh::from_parts(self.vertices, self.faces)
    }

    pub fn polylines(&self) -> Vec<Polyline> {
        self.lines.iter().map(|l| l.iter().map(|&i| self.vertices[i]).collect()).collect()
    }
}

pub fn read_obj(input: impl BufRead) -> Result<ObjData, FormatError> {
    let mut obj = ObjData::default();
    let mut pending: Vec<(usize, Vec<i64>, bool)> = Vec::new();
    for (k, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = k + 1;
        let syntax = |m: &str| FormatError::Syntax { line: lineno, message: m.to_string() };
        let mut it = line.split_whitespace();
        match it.next() {
            Some("v") => {
                let c: Vec<f64> = it
                    .take(3)
                    .map(str::parse)
                    .collect::<Result<_, _>>()
                    .map_err(|_| syntax("bad vertex"))?;
                if c.len() != 3 || !c.iter().all(|x| x.is_finite()) {
                    return Err(syntax("vertex needs three finite coordinates"));
                }
                obj.vertices.push(Vec3::new(c[0], c[1], c[2]));
            }
            Some(kind @ ("f" | "l")) => {
                let ids: Vec<i64> = it
                    .map(|t| t.split('/').next().unwrap_or("").parse::<i64>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| syntax("bad index"))?;
                pending.push((lineno, ids, kind == "f"));
            }
            _ => {}
        }
    }
    let n = obj.vertices.len() as i64;
    for (lineno, ids, is_face) in pending {
        let resolved: Vec<usize> = ids
            .iter()
            .map(|&i| {
                let j = if i < 0 { n + i } else { i - 1 };
                if (0..n).contains(&j) {
                    Ok(j as usize)
                } else {
                    Err(FormatError::Syntax { line: lineno, message: format!("index {i} out of range") })
                }
            })
            .collect::<Result<_, _>>()?;
        if is_face {
            if resolved.len() < 3 {
                return Err(FormatError::Syntax { line: lineno, message: "face needs three corners".into() });
            }
            for k in 1..resolved.len() - 1 {
                obj.faces.push([resolved[0], resolved[k], resolved[k + 1]]);
            }
        } else {
            obj.lines.push(resolved);
        }
    }
    Ok(obj)
}
