//! Finitely determined modules stored on a box, and their extension `M̄` to
//! the extended grid.
//!
//! A [`GridModule`] holds the restriction of a module `M` to a box `[a,b]`.
//! By definition it represents `res_π res_{[a,b]} M`, so every point of `Zⁿ`
//! reads its value through the convex projection `π`, and a point of `Z̄ⁿ`
//! reads it through `β ∘ α`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::extgrid::{ExtCoord, ExtPoint, GridBox, PointSet};
use crate::linalg::{FieldSpec, Matrix, PosetDiagram, Violation};

/// Anything that can be evaluated as a module over `Z̄ⁿ`.
pub trait ExtModule {
    fn field(&self) -> FieldSpec;

    fn ambient_dim(&self) -> usize;

    fn eval_space(&self, c: &ExtPoint) -> usize;

    /// The structure map for `c ≤ d`.
    fn eval_map(&self, c: &ExtPoint, d: &ExtPoint) -> Result<Matrix>;

    /// The diagram obtained by restricting to the subposet `p`.
    fn restrict_diagram(&self, p: &PointSet) -> Result<PosetDiagram> {
        if p.dim() != self.ambient_dim() {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim(), found: p.dim() });
        }
        PosetDiagram::from_fn(self.field(), p, |c| self.eval_space(c), |c, d| self.eval_map(c, d))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridModule {
    field: FieldSpec,
    bx: GridBox,
    dims: Vec<usize>,
    // steps[idx * n + axis]: the map c -> c + e_axis, when c + e_axis is in the box.
    steps: Vec<Option<Matrix>>,
}

impl GridModule {
    /// Builds a module from per-point dimensions (lexicographic over the box)
    /// and step maps keyed by `(point, axis)` with 0-based axes. Missing maps
    /// are zero matrices of the forced shape.
    pub fn new(
        field: FieldSpec,
        bx: GridBox,
        dims: Vec<usize>,
        mut maps: BTreeMap<(Vec<i64>, usize), Matrix>,
    ) -> Result<Self> {
        if dims.len() != bx.num_points() {
            return Err(Error::Input(format!(
                "box has {} points but {} dimensions were given",
                bx.num_points(),
                dims.len()
            )));
        }
        let n = bx.dim();
        let mut steps = Vec::with_capacity(dims.len() * n);
        for c in bx.int_points() {
            let idx = bx.index_of(&c).expect("own point");
            for axis in 0..n {
                let mut d = c.clone();
                d[axis] += 1;
                let slot = bx.index_of(&d).map(|j| {
                    maps.remove(&(c.clone(), axis))
                        .unwrap_or_else(|| Matrix::zeros(field, dims[j], dims[idx]))
                });
                steps.push(slot);
            }
        }
        if let Some(((c, axis), _)) = maps.into_iter().next() {
            return Err(Error::Input(format!(
                "step map from {c:?} along axis {} leaves the box",
                axis + 1
            )));
        }
        if steps.iter().flatten().any(|m| m.field() != field) {
            return Err(Error::Input("step map over a different field".into()));
        }
        Ok(GridModule { field, bx, dims, steps })
    }

    /// Builds a module from closures; `step(c, axis)` is only called when
    /// `c + e_axis` lies in the box.
    pub fn from_fn(
        field: FieldSpec,
        bx: GridBox,
        dim: impl Fn(&[i64]) -> usize,
        mut step: impl FnMut(&[i64], usize) -> Matrix,
    ) -> Result<Self> {
        let points = bx.int_points();
        let dims: Vec<usize> = points.iter().map(|c| dim(c)).collect();
        let mut maps = BTreeMap::new();
        for c in &points {
            for axis in 0..bx.dim() {
                let mut d = c.clone();
                d[axis] += 1;
                if bx.contains(&d) {
                    maps.insert((c.clone(), axis), step(c, axis));
                }
            }
        }
        GridModule::new(field, bx, dims, maps)
    }

    /// The zero module on a box.
    pub fn zero(field: FieldSpec, bx: GridBox) -> Self {
        GridModule::from_fn(field, bx, |_| 0, |_, _| Matrix::zeros(field, 0, 0))
            .expect("zero module is well formed")
    }

    /// The constant module `F^k` with identity maps.
    pub fn constant(field: FieldSpec, bx: GridBox, k: usize) -> Self {
        GridModule::from_fn(field, bx, |_| k, |_, _| Matrix::identity(field, k))
            .expect("constant module is well formed")
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn grid_box(&self) -> &GridBox {
        &self.bx
    }

    pub fn dim(&self) -> usize {
        self.bx.dim()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Dimension at an integer point of the box.
    pub fn dim_at(&self, c: &[i64]) -> usize {
        self.dims[self.bx.index_of(c).expect("point in box")]
    }

    /// Step map `c → c + e_axis` for `c, c + e_axis` in the box.
    pub fn step(&self, c: &[i64], axis: usize) -> Option<&Matrix> {
        let idx = self.bx.index_of(c)?;
        self.steps[idx * self.dim() + axis].as_ref()
    }

    /// Replaces one step map; shape is not checked here, see [`GridModule::validate`].
    pub fn set_step(&mut self, c: &[i64], axis: usize, m: Matrix) -> Result<()> {
        let idx = self
            .bx
            .index_of(c)
            .ok_or_else(|| Error::Input(format!("{c:?} is not in the box")))?;
        let n = self.dim();
        match self.steps.get_mut(idx * n + axis) {
            Some(slot @ Some(_)) => {
                *slot = Some(m);
                Ok(())
            }
            _ => Err(Error::Input(format!("no step from {c:?} along axis {}", axis + 1))),
        }
    }

    /// Step maps with their source points, in canonical order.
    pub fn steps(&self) -> impl Iterator<Item = (Vec<i64>, usize, &Matrix)> + '_ {
        let n = self.dim();
        self.bx.int_points().into_iter().flat_map(move |c| {
            let idx = self.bx.index_of(&c).expect("own point");
            (0..n).filter_map(move |axis| {
                self.steps[idx * n + axis].as_ref().map(|m| (c.clone(), axis, m))
            })
        })
    }

    /// Shape and commutativity of every elementary square in the box.
    pub fn validate(&self) -> std::result::Result<(), Violation> {
        let n = self.dim();
        for (c, axis, m) in self.steps() {
            let mut d = c.clone();
            d[axis] += 1;
            let expected = (self.dim_at(&d), self.dim_at(&c));
            if m.shape() != expected {
                return Err(Violation::Shape {
                    from: ExtPoint::from_ints(&c),
                    to: ExtPoint::from_ints(&d),
                    expected,
                    found: m.shape(),
                });
            }
        }
        for c in self.bx.int_points() {
            for i in 0..n {
                for j in (i + 1)..n {
                    let (Some(fi), Some(fj)) = (self.step(&c, i), self.step(&c, j)) else {
                        continue;
                    };
                    let mut ci = c.clone();
                    ci[i] += 1;
                    let mut cj = c.clone();
                    cj[j] += 1;
                    let (Some(gj), Some(gi)) = (self.step(&ci, j), self.step(&cj, i)) else {
                        continue;
                    };
                    if gj * fi != gi * fj {
                        let mut top = ci.clone();
                        top[j] += 1;
                        return Err(Violation::NonCommuting {
                            lower: ExtPoint::from_ints(&c),
                            upper: ExtPoint::from_ints(&top),
                            via_a: ExtPoint::from_ints(&ci),
                            via_b: ExtPoint::from_ints(&cj),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Composite of step maps from `p` to `q` (both in the box, `p ≤ q`),
    /// raising axis 1 fully, then axis 2, and so on.
    pub fn staircase(&self, p: &[i64], q: &[i64]) -> Matrix {
        let mut acc = Matrix::identity(self.field, self.dim_at(p));
        let mut cur = p.to_vec();
        for axis in 0..self.dim() {
            while cur[axis] < q[axis] {
                acc = self.step(&cur, axis).expect("staircase stays in the box") * &acc;
                cur[axis] += 1;
            }
        }
        acc
    }

    pub fn view(&self) -> ExtendedView<'_> {
        ExtendedView { base: self }
    }
}

/// `M̄` on `Z̄ⁿ`, read through `β ∘ α` from the stored box.
#[derive(Clone, Copy, Debug)]
pub struct ExtendedView<'a> {
    base: &'a GridModule,
}

impl<'a> ExtendedView<'a> {
    pub fn base(&self) -> &'a GridModule {
        self.base
    }

    pub fn grid_box(&self) -> &'a GridBox {
        &self.base.bx
    }

    /// `β(α(c))`.
    pub fn representative(&self, c: &ExtPoint) -> Vec<i64> {
        self.base.bx.project_ext(c)
    }
}

impl ExtModule for ExtendedView<'_> {
    fn field(&self) -> FieldSpec {
        self.base.field
    }

    fn ambient_dim(&self) -> usize {
        self.base.dim()
    }

    fn eval_space(&self, c: &ExtPoint) -> usize {
        self.base.dim_at(&self.representative(c))
    }

    fn eval_map(&self, c: &ExtPoint, d: &ExtPoint) -> Result<Matrix> {
        if c.dim() != self.ambient_dim() || d.dim() != self.ambient_dim() {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim(), found: c.dim() });
        }
        if !c.leq(d) {
            return Err(Error::Precondition(format!("{c} is not below {d}")));
        }
        Ok(self.base.staircase(&self.representative(c), &self.representative(d)))
    }
}

/// Dimension of `M̄(c)`.
pub fn eval_space(view: &ExtendedView<'_>, c: &ExtPoint) -> usize {
    view.eval_space(c)
}

/// `M̄(c ≤ d)`.
pub fn eval_map(view: &ExtendedView<'_>, c: &ExtPoint, d: &ExtPoint) -> Result<Matrix> {
    view.eval_map(c, d)
}

/// Restriction of `M̄` to a finite subposet.
pub fn restrict_diagram(view: &ExtendedView<'_>, p: &PointSet) -> Result<PosetDiagram> {
    view.restrict_diagram(p)
}

/// A diagram given explicitly on a window: integer points of `window`, plus
/// its `−∞`-faces when `with_neg_inf`. Used for modules that are not finitely
/// determined.
pub fn window_module(
    field: FieldSpec,
    window: &GridBox,
    with_neg_inf: bool,
    dims: impl Fn(&ExtPoint) -> usize,
    maps: impl FnMut(&ExtPoint, &ExtPoint) -> Result<Matrix>,
) -> Result<PosetDiagram> {
    let points = if with_neg_inf { window.extended() } else { window.to_point_set() };
    let d = PosetDiagram::from_fn(field, &points, dims, maps)?;
    d.validate().map_err(|v| Error::Violation(v.to_string()))?;
    Ok(d)
}

/// 0/1-dimensional window diagram with identity maps between non-zero points.
/// The predicate must describe a down-closed region for the maps to commute.
pub fn indicator_window(
    field: FieldSpec,
    window: &GridBox,
    with_neg_inf: bool,
    predicate: impl Fn(&ExtPoint) -> bool,
) -> Result<PosetDiagram> {
    let dim = |p: &ExtPoint| usize::from(predicate(p));
    window_module(field, window, with_neg_inf, dim, |c, d| {
        let (dc, dd) = (dim(c), dim(d));
        Ok(if dc == 1 && dd == 1 {
            Matrix::identity(field, 1)
        } else {
            Matrix::zeros(field, dd, dc)
        })
    })
}

/// Integer window `{d ∈ Zⁿ : c ≤ d ≤ c′}` on which `M̄(c)` stabilizes as a
/// limit, with `c′ᵢ = max(cᵢ, aᵢ − 1)`. A `−∞` coordinate is truncated to the
/// `depth + 1` integers ending at `aᵢ − 1`, all of which share `α(c)ᵢ`.
pub fn continuity_window(bx: &GridBox, c: &ExtPoint, depth: i64) -> GridBox {
    let (lo, hi): (Vec<i64>, Vec<i64>) = c
        .coords()
        .iter()
        .enumerate()
        .map(|(i, ci)| {
            let edge = bx.a[i] - 1;
            match *ci {
                ExtCoord::NegInf => (edge - depth.max(0), edge),
                ExtCoord::Int(v) => (v, v.max(edge)),
            }
        })
        .unzip();
    GridBox::new(lo, hi).expect("window corners are ordered")
}

/// `dim lim_{d ∈ window} M(d)` over [`continuity_window`], an independent
/// route to the dimension of `M̄(c)`.
pub fn limit_dimension(view: &ExtendedView<'_>, c: &ExtPoint, depth: i64) -> Result<usize> {
    let window = continuity_window(view.grid_box(), c, depth);
    let d = view.restrict_diagram(&window.to_point_set())?;
    Ok(d.limit()?.dim)
}
