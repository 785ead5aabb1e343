//! Distance spaces that node ids live in.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Triangle-inequality slack for explicit matrices.
pub const TRIANGLE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Metric {
    Euclidean(EuclideanMetric),
    Matrix(MatrixMetric),
}

impl Metric {
    pub fn distance(&self, a: NodeId, b: NodeId) -> Result<f64> {
        match self {
            Metric::Euclidean(m) => m.distance(a, b),
            Metric::Matrix(m) => m.distance(a, b),
        }
    }

    pub fn contains(&self, id: NodeId) -> bool {
        match self {
            Metric::Euclidean(m) => m.points.contains_key(&id),
            Metric::Matrix(m) => m.index.contains_key(&id),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Metric::Euclidean(m) => m.points.len(),
            Metric::Matrix(m) => m.ids.len(),
        }
    }
}

/// Points in R^d, d in {1, 2, 3}.
#[derive(Debug, Clone, PartialEq)]
pub struct EuclideanMetric {
    dim: usize,
    points: BTreeMap<NodeId, Vec<f64>>,
}

impl EuclideanMetric {
    pub fn new(dim: usize, points: BTreeMap<NodeId, Vec<f64>>) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::MetricInvalid(format!("dimension {dim} not in 1..=3")));
        }
        for (id, p) in &points {
            if p.len() != dim {
                return Err(Error::MetricInvalid(format!("point {id} has {} coordinates, expected {dim}", p.len())));
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::MetricInvalid(format!("point {id} has a non-finite coordinate")));
            }
        }
        Ok(Self { dim, points })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &BTreeMap<NodeId, Vec<f64>> {
        &self.points
    }

    pub fn point(&self, id: NodeId) -> Result<&[f64]> {
        self.points.get(&id).map(Vec::as_slice).ok_or(Error::UnknownNode(id))
    }

    pub fn distance(&self, a: NodeId, b: NodeId) -> Result<f64> {
        let (pa, pb) = (self.point(a)?, self.point(b)?);
        Ok(pa.iter().zip(pb).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt())
    }
}

/// A symmetric distance table over an explicit list of node ids.
#[derive(Debug, Clone)]
pub struct MatrixMetric {
    ids: Vec<NodeId>,
    index: HashMap<NodeId, usize>,
    d: Vec<f64>,
}

impl PartialEq for MatrixMetric {
    fn eq(&self, other: &Self) -> bool {
        self.ids == other.ids && self.d == other.d
    }
}

impl MatrixMetric {
    /// Builds and fully validates a distance table, including the O(n^3)
    /// triangle-inequality check.
    pub fn new(ids: Vec<NodeId>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let m = Self::build(ids, rows)?;
        m.check_triangle()?;
        Ok(m)
    }

    /// Same as [`MatrixMetric::new`] without the triangle check. Only for
    /// tables that are metric by construction (shortest paths in a tree).
    pub(crate) fn new_trusted(ids: Vec<NodeId>, rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::build(ids, rows)
    }

    fn build(ids: Vec<NodeId>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = ids.len();
        if rows.len() != n {
            return Err(Error::MetricInvalid(format!("{} rows for {n} ids", rows.len())));
        }
        let mut index = HashMap::with_capacity(n);
        for (i, &id) in ids.iter().enumerate() {
            if index.insert(id, i).is_some() {
                return Err(Error::MetricInvalid(format!("duplicate node id {id}")));
            }
        }
        let mut d = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::MetricInvalid(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            d.extend(row);
        }
        for i in 0..n {
            if d[i * n + i] != 0.0 {
                return Err(Error::MetricInvalid(format!("d({0},{0}) is not zero", ids[i])));
            }
            for j in 0..n {
                let x = d[i * n + j];
                if !x.is_finite() || x < 0.0 {
                    return Err(Error::MetricInvalid(format!(
                        "d({},{}) = {x} is not a finite nonnegative number",
                        ids[i], ids[j]
                    )));
                }
                if x != d[j * n + i] {
                    return Err(Error::MetricInvalid(format!("d({},{}) is not symmetric", ids[i], ids[j])));
                }
            }
        }
        Ok(Self { ids, index, d })
    }

    fn check_triangle(&self) -> Result<()> {
        let n = self.ids.len();
        for i in 0..n {
            for j in (i + 1)..n {
                let dij = self.d[i * n + j];
                for k in 0..n {
                    if dij > self.d[i * n + k] + self.d[k * n + j] + TRIANGLE_TOL {
                        return Err(Error::MetricInvalid(format!(
                            "triangle inequality fails: d({a},{b}) > d({a},{c}) + d({c},{b})",
                            a = self.ids[i],
                            b = self.ids[j],
                            c = self.ids[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn ids(&self) -> &[NodeId] {
        &self.ids
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.ids.len();
        &self.d[i * n..(i + 1) * n]
    }

    pub fn distance(&self, a: NodeId, b: NodeId) -> Result<f64> {
        let i = *self.index.get(&a).ok_or(Error::UnknownNode(a))?;
        let j = *self.index.get(&b).ok_or(Error::UnknownNode(b))?;
        Ok(self.d[i * self.ids.len() + j])
    }
}
