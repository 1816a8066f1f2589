//! Deciding whether `M̄` is determined by a finite set `S ⊂ Z̄ⁿ`, and
//! encodings through `α_S`.
//!
//! Three equivalent formulations are implemented separately so they can be
//! cross-checked: equal `S`-downsets give isomorphisms ([`is_s_determined`]),
//! the comparison maps `M̄(α(c) ≤ c)` are invertible ([`t_alpha_check`]),
//! and `res_α res_S̃ M̄ ≅ M̄` ([`encode`] + [`check_encoding`]).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::extgrid::{alpha, critical_grid, tilde_set, ExtPoint, GridBox, PointSet};
use crate::grid_module::{ExtModule, ExtendedView, GridModule};
use crate::linalg::{find_isomorphism, PosetDiagram};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    CriticalGrid,
    Oracle,
}

/// Outcome of a determinacy check.
///
/// A failing isomorphism is witnessed by `c ≤ d` with `S ∩ ↓c = S ∩ ↓d`; a
/// failing support check is witnessed by `(c, c)` with `M̄(c) ≠ 0`, `c ∉ ↑S`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeterminacyReport {
    pub holds: bool,
    pub witness: Option<(ExtPoint, ExtPoint)>,
    pub support_ok: bool,
    pub method: Method,
}

impl DeterminacyReport {
    fn ok(method: Method) -> Self {
        DeterminacyReport { holds: true, witness: None, support_ok: true, method }
    }

    fn broken(method: Method, c: ExtPoint, d: ExtPoint, support_ok: bool) -> Self {
        DeterminacyReport { holds: false, witness: Some((c, d)), support_ok, method }
    }

    pub fn into_result(self) -> Result<()> {
        match self.witness {
            Some((c, d)) if !self.holds => Err(Error::NotDetermined { c, d }),
            _ => Ok(()),
        }
    }
}

fn check_dim(view: &ExtendedView<'_>, s: &PointSet) -> Result<()> {
    if s.dim() != view.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: view.ambient_dim(), found: s.dim() });
    }
    Ok(())
}

fn same_downset(s: &PointSet, c: &ExtPoint, d: &ExtPoint) -> bool {
    // c ≤ d, so S∩↓c ⊆ S∩↓d; equality means nothing of S lies below d but not c.
    s.iter().all(|p| !p.leq(d) || p.leq(c))
}

fn scan(
    view: &ExtendedView<'_>,
    s: &PointSet,
    grid: &PointSet,
    check_support: bool,
    method: Method,
) -> Result<DeterminacyReport> {
    for (c, d, _) in grid.axis_steps()? {
        if same_downset(s, &c, &d) && !view.eval_map(&c, &d)?.is_invertible() {
            return Ok(DeterminacyReport::broken(method, c, d, true));
        }
    }
    if check_support && !s.contains(&ExtPoint::min(s.dim())) {
        if let Some(c) =
            grid.iter().find(|c| !s.covers_from_below(c) && view.eval_space(c) != 0)
        {
            return Ok(DeterminacyReport::broken(method, c.clone(), c.clone(), false));
        }
    }
    Ok(DeterminacyReport::ok(method))
}

/// Whether `M̄` is `S`-determined, checked on the axis steps of the critical
/// grid. With `check_support`, also requires `M̄` to vanish off `↑S`; that
/// part is skipped when `S` contains `(−∞,…,−∞)`.
pub fn is_s_determined(
    view: &ExtendedView<'_>,
    s: &PointSet,
    check_support: bool,
    margin: i64,
) -> Result<DeterminacyReport> {
    check_dim(view, s)?;
    let grid = critical_grid(view.grid_box(), s, margin)?;
    scan(view, s, &grid, check_support, Method::CriticalGrid)
}

/// The same test by brute force over every step of `window` and its
/// `−∞`-faces. The window must contain the box and the integer coordinates of
/// `S`, widened by `margin`; it is widened here if it does not.
pub fn is_s_determined_oracle(
    view: &ExtendedView<'_>,
    s: &PointSet,
    window: &GridBox,
    margin: i64,
    check_support: bool,
) -> Result<DeterminacyReport> {
    check_dim(view, s)?;
    if window.dim() != s.dim() {
        return Err(Error::DimensionMismatch { expected: s.dim(), found: window.dim() });
    }
    let bx = view.grid_box();
    let margin = margin.max(0);
    let mut lo = window.a.clone();
    let mut hi = window.b.clone();
    for i in 0..s.dim() {
        lo[i] = lo[i].min(bx.a[i] - margin);
        hi[i] = hi[i].max(bx.b[i] + margin);
        for p in s.iter() {
            if let Some(v) = p.coords()[i].finite() {
                lo[i] = lo[i].min(v - margin);
                hi[i] = hi[i].max(v + margin);
            }
        }
    }
    let grid = GridBox::new(lo, hi)?.extended();
    scan(view, s, &grid, check_support, Method::Oracle)
}

/// Invertibility of `M̄(α_S(c) ≤ c)` at every point of the critical grid.
pub fn t_alpha_check(
    view: &ExtendedView<'_>,
    s: &PointSet,
    margin: i64,
) -> Result<DeterminacyReport> {
    check_dim(view, s)?;
    let grid = critical_grid(view.grid_box(), s, margin)?;
    for c in grid.iter() {
        let a = alpha(s, c);
        if !view.eval_map(&a, c)?.is_invertible() {
            return Ok(DeterminacyReport::broken(Method::CriticalGrid, a, c.clone(), true));
        }
    }
    Ok(DeterminacyReport::ok(Method::CriticalGrid))
}

/// `res_S̃ M̄` with no determinacy precondition.
pub fn encoding_diagram(view: &ExtendedView<'_>, s: &PointSet) -> Result<PosetDiagram> {
    check_dim(view, s)?;
    view.restrict_diagram(&tilde_set(s))
}

/// The finite model `N = res_S̃ M̄` with `res_α N ≅ M̄`; refuses with a
/// witness when `M̄` is not `S`-determined.
pub fn encode(view: &ExtendedView<'_>, s: &PointSet, margin: i64) -> Result<PosetDiagram> {
    is_s_determined(view, s, false, margin)?.into_result()?;
    encoding_diagram(view, s)
}

/// Outcome of [`check_encoding`]; `failure` names the first offending point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EncodingCheck {
    pub holds: bool,
    pub failure: Option<String>,
}

impl EncodingCheck {
    fn fail(msg: String) -> Self {
        EncodingCheck { holds: false, failure: Some(msg) }
    }
}

/// Verifies `res_α n ≅ M̄` on the critical grid.
///
/// An isomorphism `ψ: n ≅ res_S̃ M̄` is searched first. Any isomorphism
/// `res_α n → M̄` must restrict to such a `ψ` on `S̃`, and naturality along
/// `α(c) ≤ c` then forces its component `φ_c = M̄(α(c) ≤ c) ψ_{α(c)}`. These
/// components are checked for invertibility and for naturality along every
/// grid step.
pub fn check_encoding(
    view: &ExtendedView<'_>,
    s: &PointSet,
    n: &PosetDiagram,
    margin: i64,
) -> Result<EncodingCheck> {
    check_dim(view, s)?;
    let tilde = tilde_set(s);
    if n.point_set() != tilde {
        return Ok(EncodingCheck::fail("diagram is not defined on the closure of S".into()));
    }
    let target = view.restrict_diagram(&tilde)?;
    for p in tilde.iter() {
        let (dn, dm) = (n.dim_at(p).unwrap_or(0), target.dim_at(p).unwrap_or(0));
        if dn != dm {
            return Ok(EncodingCheck::fail(format!("dimension {dn} != {dm} at {p}")));
        }
    }
    let Some(psi) = find_isomorphism(n, &target)? else {
        return Ok(EncodingCheck::fail("no isomorphism onto the restriction of M̄".into()));
    };
    let psi_at = |p: &ExtPoint| &psi[n.index_of(p).expect("closure point")];

    let grid = critical_grid(view.grid_box(), s, margin)?;
    let mut phi = std::collections::BTreeMap::new();
    for c in grid.iter() {
        let a = alpha(s, c);
        let f = &view.eval_map(&a, c)? * psi_at(&a);
        if !f.is_invertible() {
            return Ok(EncodingCheck::fail(format!("component at {c} is not invertible")));
        }
        phi.insert(c.clone(), (a, f));
    }
    for (c, d, _) in grid.axis_steps()? {
        let (ac, fc) = &phi[&c];
        let (ad, fd) = &phi[&d];
        let lhs = &view.eval_map(&c, &d)? * fc;
        let rhs = fd * &n.map_between(ac, ad)?;
        if lhs != rhs {
            return Ok(EncodingCheck::fail(format!("naturality fails on {c} <= {d}")));
        }
    }
    Ok(EncodingCheck { holds: true, failure: None })
}

/// Whether `M` is finitely determined with data in `candidate`: `M̄` is
/// `ext_box([a+u, b])`-determined.
pub fn finitely_determined_check(
    m: &GridModule,
    candidate: &GridBox,
    margin: i64,
) -> Result<DeterminacyReport> {
    if candidate.dim() != m.dim() {
        return Err(Error::DimensionMismatch { expected: m.dim(), found: candidate.dim() });
    }
    let s = candidate.shrink_lower()?.extended();
    is_s_determined(&m.view(), &s, true, margin)
}
