//! JSON scene files.
//!
//! ```json
//! {"loops": [
//!   {"type": "circle", "center": [0,0,0], "normal": [0,0,1], "radius": 1, "segments": 256, "current": 1},
//!   {"type": "rectangle", "center": [0,0,0], "u_axis": [1,0,0], "v_axis": [0,1,0],
//!    "width": 4, "height": 2, "segments_per_side": 32},
//!   {"type": "polyline", "vertices": [[0,0,0],[1,0,0],[0,1,0]], "label": "tri"}
//! ]}
//! ```
//!
//! Primitives are expanded to polylines on load. A missing `current` means 1.

use omegasurf_core::boundary::{self, make_circle, make_rectangle, BoundaryLoop, BoundarySet, Diagnostic, Severity};
use omegasurf_core::{Point3, Vec3};
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, thiserror::Error)]
pub enum SceneError {
    #[error("malformed scene JSON: {0}")]
    Parse(String),
    #[error("scene schema error in {context}: {message}")]
    Schema { context: String, message: String },
    #[error("{context}: {source}")]
    Degenerate {
        context: String,
        source: omegasurf_core::Error,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum LoopSpec {
    Polyline {
        vertices: Vec<[f64; 3]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        current: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    Circle {
        center: [f64; 3],
        normal: [f64; 3],
        radius: f64,
        segments: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        current: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    Rectangle {
        center: [f64; 3],
        u_axis: [f64; 3],
        v_axis: [f64; 3],
        width: f64,
        height: f64,
        segments_per_side: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        current: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
}

impl LoopSpec {
    fn current(&self) -> Option<f64> {
        match self {
            LoopSpec::Polyline { current, .. } | LoopSpec::Circle { current, .. } | LoopSpec::Rectangle { current, .. } => *current,
        }
    }

    fn label(&self) -> Option<&str> {
        match self {
            LoopSpec::Polyline { label, .. } | LoopSpec::Circle { label, .. } | LoopSpec::Rectangle { label, .. } => {
                label.as_deref()
            }
        }
    }

    /// Expands the primitive with the given current.
    pub fn build(&self, current: f64) -> omegasurf_core::Result<BoundaryLoop> {
        let v = Vec3::from_array;
        let lp = match self {
            LoopSpec::Polyline { vertices, .. } => {
                BoundaryLoop::new(vertices.iter().map(|&p| v(p)).collect(), current, "polyline")?
            }
            LoopSpec::Circle { center, normal, radius, segments, .. } => {
                make_circle(v(*center), v(*normal), *radius, *segments, current)?
            }
            LoopSpec::Rectangle { center, u_axis, v_axis, width, height, segments_per_side, .. } => {
                make_rectangle(v(*center), v(*u_axis), v(*v_axis), *width, *height, *segments_per_side, current)?
            }
        };
        Ok(match self.label() {
            Some(l) => lp.with_label(l),
            None => lp,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SceneSpec {
    pub loops: Vec<LoopSpec>,
}

/// A parsed scene plus the non-fatal findings met while loading it.
#[derive(Debug, Clone)]
pub struct Scene {
    pub set: BoundarySet,
    pub warnings: Vec<String>,
}

fn loop_context(i: usize, label: Option<&str>) -> String {
    match label {
        Some(l) => format!("loop {i} ({l:?})"),
        None => format!("loop {i}"),
    }
}

/// Parses and expands a scene. Warnings are also sent to the log.
pub fn parse_scene(bytes: &[u8]) -> Result<Scene, SceneError> {
    let root: Value = serde_json::from_slice(bytes).map_err(|e| SceneError::Parse(e.to_string()))?;
    let schema = |context: &str, message: String| SceneError::Schema { context: context.to_string(), message };
    let loops = root
        .get("loops")
        .ok_or_else(|| schema("scene", "missing field `loops`".into()))?
        .as_array()
        .ok_or_else(|| schema("scene", "`loops` must be an array".into()))?;
    if loops.is_empty() {
        return Err(schema("scene", "`loops` is empty".into()));
    }
    let mut warnings = Vec::new();
    let mut built = Vec::with_capacity(loops.len());
    for (i, raw) in loops.iter().enumerate() {
        let label = raw.get("label").and_then(Value::as_str);
        let context = loop_context(i, label);
        let spec: LoopSpec = serde_json::from_value(raw.clone()).map_err(|e| schema(&context, e.to_string()))?;
        let current = spec.current().unwrap_or_else(|| {
            warnings.push(format!("{context}: no `current`, using 1.0"));
            1.0
        });
        if !current.is_finite() {
            return Err(schema(&context, "`current` must be finite".into()));
        }
        let lp = spec
            .build(current)
            .map_err(|source| SceneError::Degenerate { context: context.clone(), source })?;
        built.push(lp);
    }
    for d in boundary::validate_loops(&built) {
        let li = match d {
            Diagnostic::DegenerateSegment { loop_index, .. }
            | Diagnostic::NearDuplicateVertex { loop_index, .. }
            | Diagnostic::ZeroCurrent { loop_index }
            | Diagnostic::SelfIntersection { loop_index, .. } => loop_index,
        };
        let context = loop_context(li, loops[li].get("label").and_then(Value::as_str));
        if d.severity() == Severity::Error {
            return Err(SceneError::Degenerate {
                context,
                source: omegasurf_core::Error::DegenerateInput("coincident consecutive vertices"),
            });
        }
        warnings.push(format!("{context}: {d:?}"));
    }
    let set = BoundarySet::new(built).map_err(|source| SceneError::Degenerate { context: "scene".into(), source })?;
    for w in &warnings {
        log::warn!("{w}");
    }
    Ok(Scene { set, warnings })
}

/// The set as a scene of explicit polylines.
pub fn scene_json(set: &BoundarySet) -> String {
    let spec = SceneSpec {
        loops: set
            .loops()
            .iter()
            .map(|lp| LoopSpec::Polyline {
                vertices: lp.vertices().iter().map(|p: &Point3| p.to_array()).collect(),
                current: Some(lp.current()),
                label: Some(lp.label().to_string()),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&spec).expect("scene serialises")
}
