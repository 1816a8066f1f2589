//! Functors from a finite subposet of `Z̄ⁿ` to finite-dimensional vector
//! spaces, stored by their values on covering relations.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use super::field::FieldSpec;
use super::matrix::Matrix;
use crate::error::{Error, Result};
use crate::extgrid::{ExtPoint, PointSet};

/// First problem found by [`PosetDiagram::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    /// A cover map whose shape is not `dims(to) × dims(from)`.
    Shape { from: ExtPoint, to: ExtPoint, expected: (usize, usize), found: (usize, usize) },
    /// Two cover paths from `lower` to `upper`, through `via_a` and `via_b`,
    /// with different composites.
    NonCommuting { lower: ExtPoint, upper: ExtPoint, via_a: ExtPoint, via_b: ExtPoint },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape { from, to, expected, found } => write!(
                f,
                "map {from} -> {to} has shape {}x{}, expected {}x{}",
                found.0, found.1, expected.0, expected.1
            ),
            Violation::NonCommuting { lower, upper, via_a, via_b } => write!(
                f,
                "square {lower} -> {{{via_a}, {via_b}}} -> {upper} does not commute"
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PosetDiagram {
    field: FieldSpec,
    ambient: usize,
    points: Vec<ExtPoint>,
    index: HashMap<ExtPoint, usize>,
    dims: Vec<usize>,
    maps: BTreeMap<(usize, usize), Matrix>,
    upper: Vec<Vec<usize>>,
    lower: Vec<Vec<usize>>,
}

/// Colimit of a diagram: its dimension and the structure maps `V_p → colim`.
#[derive(Clone, Debug)]
pub struct Colimit {
    pub dim: usize,
    pub injections: BTreeMap<ExtPoint, Matrix>,
}

/// Limit of a diagram: its dimension and the structure maps `lim → V_p`.
#[derive(Clone, Debug)]
pub struct Limit {
    pub dim: usize,
    pub projections: BTreeMap<ExtPoint, Matrix>,
}

/// Covering pairs `(i, j)` of the poset on `points`, which must be sorted in
/// an order refining the product order (lexicographic order does).
fn cover_pairs(points: &[ExtPoint]) -> Vec<(usize, usize)> {
    let n = points.len();
    let mut out = Vec::new();
    for i in 0..n {
        // Upper covers of i are the minimal elements of the strict upset.
        let mut mins: Vec<usize> = Vec::new();
        for j in (i + 1)..n {
            if points[i].leq(&points[j]) && !mins.iter().any(|&m| points[m].leq(&points[j])) {
                mins.push(j);
            }
        }
        out.extend(mins.into_iter().map(|j| (i, j)));
    }
    out
}

impl PosetDiagram {
    /// Builds a diagram on `points`. Cover maps not listed default to zero
    /// matrices of the forced shape; listed pairs must be covering pairs.
    pub fn new(
        field: FieldSpec,
        points: &PointSet,
        dims: impl Fn(&ExtPoint) -> usize,
        mut maps: BTreeMap<(ExtPoint, ExtPoint), Matrix>,
    ) -> Result<Self> {
        let pts = points.to_vec();
        let index: HashMap<ExtPoint, usize> =
            pts.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let dims: Vec<usize> = pts.iter().map(&dims).collect();
        let covers = cover_pairs(&pts);
        let mut upper = vec![Vec::new(); pts.len()];
        let mut lower = vec![Vec::new(); pts.len()];
        let mut stored = BTreeMap::new();
        for &(i, j) in &covers {
            upper[i].push(j);
            lower[j].push(i);
            let m = maps
                .remove(&(pts[i].clone(), pts[j].clone()))
                .unwrap_or_else(|| Matrix::zeros(field, dims[j], dims[i]));
            if m.field() != field {
                return Err(Error::Input(format!(
                    "map {} -> {} is over {}, diagram over {field}",
                    pts[i],
                    pts[j],
                    m.field()
                )));
            }
            stored.insert((i, j), m);
        }
        if let Some(((c, d), _)) = maps.into_iter().next() {
            return Err(Error::Input(format!("{c} -> {d} is not a covering pair of the diagram")));
        }
        Ok(PosetDiagram {
            field,
            ambient: points.dim(),
            points: pts,
            index,
            dims,
            maps: stored,
            upper,
            lower,
        })
    }

    /// Builds a diagram whose cover maps are produced by `map` (called with
    /// each covering pair).
    pub fn from_fn(
        field: FieldSpec,
        points: &PointSet,
        dims: impl Fn(&ExtPoint) -> usize,
        mut map: impl FnMut(&ExtPoint, &ExtPoint) -> Result<Matrix>,
    ) -> Result<Self> {
        let pts = points.to_vec();
        let mut maps = BTreeMap::new();
        for (i, j) in cover_pairs(&pts) {
            let m = map(&pts[i], &pts[j])?;
            maps.insert((pts[i].clone(), pts[j].clone()), m);
        }
        PosetDiagram::new(field, points, dims, maps)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn points(&self) -> &[ExtPoint] {
        &self.points
    }

    pub fn point_set(&self) -> PointSet {
        PointSet::from_points(self.ambient, self.points.iter().cloned())
            .expect("diagram points share a dimension")
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, p: &ExtPoint) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn dim_at(&self, p: &ExtPoint) -> Option<usize> {
        self.index_of(p).map(|i| self.dims[i])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Covering pairs with their maps, in canonical order.
    pub fn cover_maps(&self) -> impl Iterator<Item = (&ExtPoint, &ExtPoint, &Matrix)> {
        self.maps.iter().map(|(&(i, j), m)| (&self.points[i], &self.points[j], m))
    }

    pub fn cover_map(&self, c: &ExtPoint, d: &ExtPoint) -> Option<&Matrix> {
        let i = self.index_of(c)?;
        let j = self.index_of(d)?;
        self.maps.get(&(i, j))
    }

    pub(crate) fn map_by_index(&self, i: usize, j: usize) -> Matrix {
        let mut acc = Matrix::identity(self.field, self.dims[i]);
        let mut cur = i;
        let target = &self.points[j];
        while cur != j {
            let next = *self.upper[cur]
                .iter()
                .find(|&&u| self.points[u].leq(target))
                .expect("target lies above the current point");
            acc = &self.maps[&(cur, next)] * &acc;
            cur = next;
        }
        acc
    }

    /// `V(c ≤ d)` as a composite of cover maps.
    pub fn map_between(&self, c: &ExtPoint, d: &ExtPoint) -> Result<Matrix> {
        let i = self
            .index_of(c)
            .ok_or_else(|| Error::Input(format!("{c} is not a point of the diagram")))?;
        let j = self
            .index_of(d)
            .ok_or_else(|| Error::Input(format!("{d} is not a point of the diagram")))?;
        if !c.leq(d) {
            return Err(Error::Precondition(format!("{c} is not below {d}")));
        }
        Ok(self.map_by_index(i, j))
    }

    /// Checks cover-map shapes and that every pair of cover paths between two
    /// points composes to the same map.
    pub fn validate(&self) -> std::result::Result<(), Violation> {
        for (&(i, j), m) in &self.maps {
            let expected = (self.dims[j], self.dims[i]);
            if m.shape() != expected {
                return Err(Violation::Shape {
                    from: self.points[i].clone(),
                    to: self.points[j].clone(),
                    expected,
                    found: m.shape(),
                });
            }
        }
        let n = self.points.len();
        for i in 0..n {
            // composite[j] = V(p_i ≤ p_j) along the first-found path; every
            // other lower cover of p_j above p_i must give the same composite.
            let mut composite: Vec<Option<(Matrix, usize)>> = vec![None; n];
            composite[i] = Some((Matrix::identity(self.field, self.dims[i]), i));
            for j in (i + 1)..n {
                if !self.points[i].leq(&self.points[j]) {
                    continue;
                }
                let mut first: Option<(Matrix, usize)> = None;
                for &l in &self.lower[j] {
                    let Some((via, _)) = &composite[l] else { continue };
                    let m = &self.maps[&(l, j)] * via;
                    match &first {
                        None => first = Some((m, l)),
                        Some((f, fl)) if *f != m => {
                            return Err(Violation::NonCommuting {
                                lower: self.points[i].clone(),
                                upper: self.points[j].clone(),
                                via_a: self.points[*fl].clone(),
                                via_b: self.points[l].clone(),
                            });
                        }
                        Some(_) => {}
                    }
                }
                composite[j] = first;
            }
        }
        Ok(())
    }

    fn require_valid(&self) -> Result<()> {
        self.validate()
            .map_err(|v| Error::Precondition(format!("diagram is not valid: {v}")))
    }

    fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.dims
            .iter()
            .map(|d| {
                let o = acc;
                acc += d;
                o
            })
            .collect()
    }

    /// `(⊕_p V_p) / span{ι_d f(x) − ι_c x}` over all covers `c ⋖ d`.
    pub fn colimit(&self) -> Result<Colimit> {
        self.require_valid()?;
        let f = self.field;
        let off = self.offsets();
        let total = self.total_dim();
        let nrel: usize = self.maps.keys().map(|&(i, _)| self.dims[i]).sum();
        let mut rel = Matrix::zeros(f, total, nrel);
        let mut col = 0;
        for (&(i, j), m) in &self.maps {
            for k in 0..self.dims[i] {
                for r in 0..self.dims[j] {
                    rel.set(off[j] + r, col, m.get(r, k).clone());
                }
                rel.set(off[i] + k, col, f.neg(&f.one()));
                col += 1;
            }
        }
        let q = rel.cokernel_projection();
        let injections = self
            .points
            .iter()
            .enumerate()
            .map(|(p, pt)| {
                let cols: Vec<usize> = (off[p]..off[p] + self.dims[p]).collect();
                (pt.clone(), q.select_cols(&cols))
            })
            .collect();
        Ok(Colimit { dim: q.rows(), injections })
    }

    /// Kernel of `(x_p) ↦ (f_{c⋖d} x_c − x_d)` over all covers.
    pub fn limit(&self) -> Result<Limit> {
        self.require_valid()?;
        let f = self.field;
        let off = self.offsets();
        let total = self.total_dim();
        let neq: usize = self.maps.keys().map(|&(_, j)| self.dims[j]).sum();
        let mut diff = Matrix::zeros(f, neq, total);
        let mut row = 0;
        for (&(i, j), m) in &self.maps {
            diff.put_block(row, off[i], m);
            for r in 0..self.dims[j] {
                diff.set(row + r, off[j] + r, f.neg(&f.one()));
            }
            row += self.dims[j];
        }
        let k = diff.kernel_basis();
        let projections = self
            .points
            .iter()
            .enumerate()
            .map(|(p, pt)| {
                let rows: Vec<usize> = (off[p]..off[p] + self.dims[p]).collect();
                (pt.clone(), k.select_rows(&rows))
            })
            .collect();
        Ok(Limit { dim: k.cols(), projections })
    }

    /// The full subdiagram on the points satisfying `keep`, with composite
    /// maps on the covers of the subposet.
    pub fn restrict(&self, keep: impl Fn(&ExtPoint) -> bool) -> PosetDiagram {
        let kept: Vec<usize> = (0..self.points.len()).filter(|&i| keep(&self.points[i])).collect();
        let pts: Vec<ExtPoint> = kept.iter().map(|&i| self.points[i].clone()).collect();
        let covers = cover_pairs(&pts);
        let mut maps = BTreeMap::new();
        for (a, b) in covers {
            maps.insert((pts[a].clone(), pts[b].clone()), self.map_by_index(kept[a], kept[b]));
        }
        let set = PointSet::from_points(self.ambient, pts).expect("same ambient dimension");
        PosetDiagram::new(self.field, &set, |p| self.dim_at(p).unwrap_or(0), maps)
            .expect("restricted covers are covers")
    }
}

/// `diagram_colimit` of a validated diagram.
pub fn diagram_colimit(d: &PosetDiagram) -> Result<Colimit> {
    d.colimit()
}

/// `diagram_limit` of a validated diagram.
pub fn diagram_limit(d: &PosetDiagram) -> Result<Limit> {
    d.limit()
}

/// `validate_diagram`.
pub fn validate_diagram(d: &PosetDiagram) -> std::result::Result<(), Violation> {
    d.validate()
}
