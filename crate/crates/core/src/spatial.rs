//! Uniform-grid bucket index for radius and nearest-point queries.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::math;
use crate::vec3::Point3;

type Cell = (i64, i64, i64);

#[derive(Debug, Clone)]
pub struct PointIndex {
    cell: f64,
    points: Vec<Point3>,
    buckets: BTreeMap<Cell, Vec<usize>>,
    lo: Cell,
    hi: Cell,
}

impl PointIndex {
    /// `cell` should be of the order of the typical query radius.
    pub fn new(points: &[Point3], cell: f64) -> Self {
        let cell = if cell > 0.0 && cell.is_finite() { cell } else { 1.0 };
        let mut idx = PointIndex {
            cell,
            points: Vec::with_capacity(points.len()),
            buckets: BTreeMap::new(),
            lo: (i64::MAX, i64::MAX, i64::MAX),
            hi: (i64::MIN, i64::MIN, i64::MIN),
        };
        for &p in points {
            idx.insert(p);
        }
        idx
    }

    fn key(&self, p: Point3) -> Cell {
        let f = |x: f64| math::floor(x / self.cell) as i64;
        (f(p.x), f(p.y), f(p.z))
    }

    /// Adds a point and returns its index.
    pub fn insert(&mut self, p: Point3) -> usize {
        let i = self.points.len();
        self.points.push(p);
        let key = self.key(p);
        self.lo = (self.lo.0.min(key.0), self.lo.1.min(key.1), self.lo.2.min(key.2));
        self.hi = (self.hi.0.max(key.0), self.hi.1.max(key.1), self.hi.2.max(key.2));
        self.buckets.entry(key).or_default().push(i);
        i
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> Point3 {
        self.points[i]
    }

    /// Visits cells at Chebyshev distance in `[inner, reach]` from `p`'s cell.
    fn for_cells_within(&self, p: Point3, inner: i64, reach: i64, mut f: impl FnMut(usize)) {
        let (cx, cy, cz) = self.key(p);
        for x in cx - reach..=cx + reach {
            for y in cy - reach..=cy + reach {
                for z in cz - reach..=cz + reach {
                    let ring = (x - cx).abs().max((y - cy).abs()).max((z - cz).abs());
                    if ring < inner {
                        continue;
                    }
                    if let Some(b) = self.buckets.get(&(x, y, z)) {
                        b.iter().for_each(|&i| f(i));
                    }
                }
            }
        }
    }

    fn sweep_too_large(&self, reach: i64) -> bool {
        let side = (2 * reach + 1) as f64;
        side * side * side > 8.0 * self.buckets.len() as f64 + 27.0
    }

    /// Indices of points within `radius` of `p`, ascending.
    pub fn within(&self, p: Point3, radius: f64) -> Vec<usize> {
        let reach = math::ceil(radius / self.cell).min(1e15) as i64;
        let mut out = Vec::new();
        let mut keep = |i: usize| {
            if self.points[i].distance(p) <= radius {
                out.push(i);
            }
        };
        if self.sweep_too_large(reach) {
            (0..self.points.len()).for_each(&mut keep);
        } else {
            self.for_cells_within(p, 0, reach, &mut keep);
        }
        out.sort_unstable();
        out
    }

    /// Closest point satisfying `accept`, ties broken by lower index, searched
    /// out to `max_radius`.
    pub fn nearest_where(&self, p: Point3, max_radius: f64, accept: impl Fn(usize) -> bool) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        if self.points.is_empty() {
            return None;
        }
        let (cx, cy, cz) = self.key(p);
        let span = [cx - self.lo.0, self.hi.0 - cx, cy - self.lo.1, self.hi.1 - cy, cz - self.lo.2, self.hi.2 - cz]
            .into_iter()
            .fold(0, i64::max);
        let max_reach = (math::ceil(max_radius / self.cell).min(1e15) as i64).min(span);
        let consider = |i: usize, best: &mut Option<(usize, f64)>| {
            if !accept(i) {
                return;
            }
            let d = self.points[i].distance(p);
            if d > max_radius {
                return;
            }
            match *best {
                Some((bi, bd)) if d > bd || (d == bd && i >= bi) => {}
                _ => *best = Some((i, d)),
            }
        };
        let mut reach = 0;
        loop {
            if self.sweep_too_large(reach) {
                (0..self.points.len()).for_each(|i| consider(i, &mut best));
                return best;
            }
            self.for_cells_within(p, reach, reach, |i| consider(i, &mut best));
            if let Some((_, d)) = best {
                if d <= reach as f64 * self.cell {
                    return best;
                }
            }
            if reach >= max_reach {
                return best;
            }
            reach += 1;
        }
    }

    pub fn nearest(&self, p: Point3, max_radius: f64) -> Option<(usize, f64)> {
        self.nearest_where(p, max_radius, |_| true)
    }
}

/// Median of a list, `None` when empty. NaNs sort last.
pub fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_unstable_by(|a, b| a.total_cmp(b));
    let n = values.len();
    Some(if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    })
}

/// Median distance from each point to its nearest other point.
pub fn median_nearest_spacing(points: &[Point3], hint: f64) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let idx = PointIndex::new(points, hint);
    let mut d: Vec<f64> = (0..points.len())
        .filter_map(|i| idx.nearest_where(points[i], f64::INFINITY, |j| j != i && points[j] != points[i]))
        .map(|(_, d)| d)
        .collect();
    median(&mut d)
}
