use serde::{Deserialize, Serialize};
use std::collections::HashSet;

use crate::error::{Error, Result};

/// Geometry of Ω. Interval and box coordinates are in length units; a mask
/// lists lattice indices directly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainDescriptor {
    Interval { a: f64, b: f64 },
    /// The square `(a, b)²`.
    Box { a: f64, b: f64 },
    Disk { center: [f64; 2], radius: f64 },
    Mask { dim: usize, cells: Vec<[i64; 2]> },
}

impl DomainDescriptor {
    pub fn dim(&self) -> usize {
        match self {
            DomainDescriptor::Interval { .. } => 1,
            DomainDescriptor::Box { .. } | DomainDescriptor::Disk { .. } => 2,
            DomainDescriptor::Mask { dim, .. } => *dim,
        }
    }

    fn contains(&self, p: [f64; 2]) -> bool {
        match *self {
            DomainDescriptor::Interval { a, b } => a < p[0] && p[0] < b,
            DomainDescriptor::Box { a, b } => a < p[0] && p[0] < b && a < p[1] && p[1] < b,
            DomainDescriptor::Disk { center, radius } => {
                let (dx, dy) = (p[0] - center[0], p[1] - center[1]);
                dx * dx + dy * dy < radius * radius
            }
            DomainDescriptor::Mask { .. } => unreachable!("masks are enumerated directly"),
        }
    }

    /// Index range per axis that can contain cell centers.
    fn index_bounds(&self, h: f64) -> [(i64, i64); 2] {
        let span = |lo: f64, hi: f64| ((lo / h).floor() as i64 - 1, (hi / h).ceil() as i64 + 1);
        match *self {
            DomainDescriptor::Interval { a, b } => [span(a, b), (0, 0)],
            DomainDescriptor::Box { a, b } => [span(a, b), span(a, b)],
            DomainDescriptor::Disk { center, radius } => [
                span(center[0] - radius, center[0] + radius),
                span(center[1] - radius, center[1] + radius),
            ],
            DomainDescriptor::Mask { .. } => unreachable!(),
        }
    }
}

/// Lattice cells `[h i, h (i+1)) × …` whose centers lie in Ω.
///
/// Cells are kept in lexicographic order; for N = 1 the second index is 0.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeDomain {
    pub descriptor: DomainDescriptor,
    pub dim: usize,
    pub h: f64,
    pub cells: Vec<[i64; 2]>,
    pub volume: f64,
}

impl LatticeDomain {
    pub fn new(descriptor: DomainDescriptor, h: f64) -> Result<Self> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::Input(format!("lattice spacing {h} must be positive")));
        }
        let dim = descriptor.dim();
        if !(dim == 1 || dim == 2) {
            return Err(Error::Unsupported(format!("dimension {dim}")));
        }
        let cells = match &descriptor {
            DomainDescriptor::Mask { cells, .. } => {
                let mut sorted = cells.clone();
                if dim == 1 && sorted.iter().any(|c| c[1] != 0) {
                    return Err(Error::Input("one-dimensional mask cells must have second index 0".into()));
                }
                sorted.sort();
                let before = sorted.len();
                sorted.dedup();
                if sorted.len() != before {
                    return Err(Error::Input("mask contains duplicate cells".into()));
                }
                sorted
            }
            d => {
                let [(x0, x1), (y0, y1)] = d.index_bounds(h);
                let mut out = Vec::new();
                for i in x0..=x1 {
                    for j in y0..=y1 {
                        let center = [(i as f64 + 0.5) * h, if dim == 1 { 0.0 } else { (j as f64 + 0.5) * h }];
                        if d.contains(center) {
                            out.push([i, j]);
                        }
                    }
                }
                out
            }
        };
        if cells.is_empty() {
            return Err(Error::Input("domain contains no lattice cells at this spacing".into()));
        }
        let volume = h.powi(dim as i32) * cells.len() as f64;
        Ok(Self { descriptor, dim, h, cells, volume })
    }

    pub fn interval(a: f64, b: f64, h: f64) -> Result<Self> {
        Self::new(DomainDescriptor::Interval { a, b }, h)
    }

    pub fn square(a: f64, b: f64, h: f64) -> Result<Self> {
        Self::new(DomainDescriptor::Box { a, b }, h)
    }

    pub fn disk(center: [f64; 2], radius: f64, h: f64) -> Result<Self> {
        Self::new(DomainDescriptor::Disk { center, radius }, h)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Smallest and largest index per axis.
    pub fn bounding_box(&self) -> ([i64; 2], [i64; 2]) {
        let mut lo = [i64::MAX; 2];
        let mut hi = [i64::MIN; 2];
        for c in &self.cells {
            for k in 0..2 {
                lo[k] = lo[k].min(c[k]);
                hi[k] = hi[k].max(c[k]);
            }
        }
        (lo, hi)
    }

    /// Number of lattice sites per axis spanned by the bounding box.
    pub fn extent(&self) -> [usize; 2] {
        let (lo, hi) = self.bounding_box();
        [(hi[0] - lo[0] + 1) as usize, (hi[1] - lo[1] + 1) as usize]
    }

    /// Largest `|d_k|` between any two cells.
    pub fn max_offset(&self) -> usize {
        let e = self.extent();
        e[0].max(e[1]) - 1
    }

    /// For each cell, the position of its point reflection through the
    /// bounding-box center, or `None` if the mask is not symmetric.
    pub fn reflection(&self) -> Option<Vec<usize>> {
        let (lo, hi) = self.bounding_box();
        let sum = [lo[0] + hi[0], lo[1] + hi[1]];
        let lookup: std::collections::HashMap<[i64; 2], usize> =
            self.cells.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        self.cells
            .iter()
            .map(|c| lookup.get(&[sum[0] - c[0], sum[1] - c[1]]).copied())
            .collect()
    }

    /// Whether every cell of `self` is also a cell of `other` at the same spacing.
    pub fn is_subset_of(&self, other: &LatticeDomain) -> bool {
        let set: HashSet<&[i64; 2]> = other.cells.iter().collect();
        self.h == other.h && self.cells.iter().all(|c| set.contains(c))
    }
}
