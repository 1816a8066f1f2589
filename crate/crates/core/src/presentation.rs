//! Births and deaths, explicit finite presentations `K → N → M̄ → 0`, and
//! admissibility of join-closed sets through zip and unzip.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::determinacy::{is_s_determined, DeterminacyReport};
use crate::error::{Error, Result};
use crate::extgrid::{alpha, critical_grid, hat_closure, tilde_set, ExtPoint, PointSet};
use crate::grid_module::{ExtModule, ExtendedView, GridModule};
use crate::linalg::{FieldSpec, Matrix, PosetDiagram};

/// The map `colim_{t ∈ sub} V(t) → W` induced by `legs(t): V(t) → W`.
fn colimit_comparison(
    sub: &PosetDiagram,
    target_dim: usize,
    mut legs: impl FnMut(&ExtPoint) -> Result<Matrix>,
) -> Result<Matrix> {
    let f = sub.field();
    let colim = sub.colimit()?;
    let mut q = Matrix::zeros(f, colim.dim, 0);
    let mut g = Matrix::zeros(f, target_dim, 0);
    for p in sub.points() {
        q = q.hstack(&colim.injections[p])?;
        g = g.hstack(&legs(p)?)?;
    }
    // λ·Q = G with Q surjective, so λ is unique.
    let lt = q
        .transpose()
        .solve(&g.transpose())?
        .ok_or_else(|| Error::Internal("legs do not factor through the colimit".into()))?;
    Ok(lt.transpose())
}

/// `λ_c: colim_{p < c} V(p) → V(c)` over the strict downset of `c` in `d`.
pub fn lambda_map(d: &PosetDiagram, c: &ExtPoint) -> Result<Matrix> {
    let dc = d
        .dim_at(c)
        .ok_or_else(|| Error::Input(format!("{c} is not a point of the diagram")))?;
    let sub = d.restrict(|p| p.lt(c));
    colimit_comparison(&sub, dc, |p| d.map_between(p, c))
}

/// Births (`dim coker λ`) and deaths (`dim ker λ`) with their multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BirthDeathReport {
    pub births: BTreeMap<ExtPoint, usize>,
    pub deaths: BTreeMap<ExtPoint, usize>,
}

/// Scans every point of a finite diagram.
pub fn diagram_births_deaths(d: &PosetDiagram) -> Result<BirthDeathReport> {
    let mut out = BirthDeathReport::default();
    for c in d.points() {
        let lam = lambda_map(d, c)?;
        let r = lam.rank();
        if lam.rows() > r {
            out.births.insert(c.clone(), lam.rows() - r);
        }
        if lam.cols() > r {
            out.deaths.insert(c.clone(), lam.cols() - r);
        }
    }
    Ok(out)
}

/// Births and deaths of `M̄`, read off its encoding on `S̃`.
pub fn births_deaths(
    view: &ExtendedView<'_>,
    s: &PointSet,
    margin: i64,
) -> Result<BirthDeathReport> {
    let n = crate::determinacy::encode(view, s, margin)?;
    diagram_births_deaths(&n)
}

/// A free module `⊕ F[↑p]^{m}` given by points and multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Graded {
    pub point: ExtPoint,
    pub multiplicity: usize,
}

/// An exact sequence `K → N → M̄ → 0` with `N`, `K` free.
///
/// Generators and relations are grouped by point in lexicographic order.
/// `generator_images[i]` holds the images in `M̄(p)` of the generators of
/// group `i` as columns. `rel_matrix` has one row per generator and one
/// column per relation, in group order; it is graded, so a relation at `d`
/// only involves generators at points `≤ d`.
#[derive(Clone, Debug, PartialEq)]
pub struct Presentation {
    pub field: FieldSpec,
    pub dim: usize,
    pub generators: Vec<Graded>,
    pub generator_images: Vec<Matrix>,
    pub relations: Vec<Graded>,
    pub rel_matrix: Matrix,
}

impl Presentation {
    pub fn num_generators(&self) -> usize {
        self.generators.iter().map(|g| g.multiplicity).sum()
    }

    pub fn num_relations(&self) -> usize {
        self.relations.iter().map(|g| g.multiplicity).sum()
    }

    fn expand(groups: &[Graded]) -> Vec<&ExtPoint> {
        groups
            .iter()
            .flat_map(|g| std::iter::repeat(&g.point).take(g.multiplicity))
            .collect()
    }

    /// Point of every individual generator.
    pub fn generator_points(&self) -> Vec<&ExtPoint> {
        Self::expand(&self.generators)
    }

    /// Point of every individual relation.
    pub fn relation_points(&self) -> Vec<&ExtPoint> {
        Self::expand(&self.relations)
    }

    /// The block of `rel_matrix` between one relation group and one generator group.
    pub fn block(&self, relation: usize, generator: usize) -> Matrix {
        let r0: usize = self.relations[..relation].iter().map(|g| g.multiplicity).sum();
        let g0: usize = self.generators[..generator].iter().map(|g| g.multiplicity).sum();
        self.rel_matrix.block(
            g0,
            r0,
            self.generators[generator].multiplicity,
            self.relations[relation].multiplicity,
        )
    }

    /// Checks shapes and the grading of `rel_matrix`.
    pub fn check_shape(&self) -> Result<()> {
        let (ng, nr) = (self.num_generators(), self.num_relations());
        if self.rel_matrix.shape() != (ng, nr) {
            return Err(Error::Shape(format!(
                "relation matrix is {:?}, expected {:?}",
                self.rel_matrix.shape(),
                (ng, nr)
            )));
        }
        if self.generator_images.len() != self.generators.len() {
            return Err(Error::Shape("one image block per generator group is required".into()));
        }
        for (g, img) in self.generators.iter().zip(&self.generator_images) {
            if img.cols() != g.multiplicity {
                return Err(Error::Shape(format!("image block at {} has wrong width", g.point)));
            }
        }
        for p in self.generators.iter().chain(&self.relations) {
            if p.point.dim() != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, found: p.point.dim() });
            }
        }
        let gp = self.generator_points();
        for (j, rp) in self.relation_points().into_iter().enumerate() {
            for (i, g) in gp.iter().enumerate() {
                if !g.leq(rp) && !self.rel_matrix.get(i, j).is_zero() {
                    return Err(Error::Shape(format!(
                        "relation at {rp} involves generator at {g}, which is not below it"
                    )));
                }
            }
        }
        Ok(())
    }
}

fn group(points: &[ExtPoint]) -> Vec<Graded> {
    let mut out: Vec<Graded> = Vec::new();
    for p in points {
        match out.last_mut() {
            Some(g) if &g.point == p => g.multiplicity += 1,
            _ => out.push(Graded { point: p.clone(), multiplicity: 1 }),
        }
    }
    out
}

/// Builds a presentation of `M̄` from its encoding on `S̃`.
///
/// Points of `S̃` are visited in lexicographic order. At each point `c`, new
/// generators complete the image of the earlier generators to a basis of
/// `M̄(c)` (first standard basis vectors that are independent), and new
/// relations complete the relations inherited from points below `c` to a
/// basis of the kernel of `ε_c: F^{generators ≤ c} → M̄(c)`.
pub fn build_presentation(
    view: &ExtendedView<'_>,
    s: &PointSet,
    margin: i64,
) -> Result<Presentation> {
    let n = crate::determinacy::encode(view, s, margin)?;
    presentation_of_diagram(&n)
}

/// The same construction for any finite diagram, such as an encoding.
pub fn presentation_of_diagram(n: &PosetDiagram) -> Result<Presentation> {
    let f = n.field();
    // Individual generators: (point, image vector in n(point)).
    let mut gens: Vec<(ExtPoint, Matrix)> = Vec::new();
    // Individual relations: (point, coefficient vector over all generators so far).
    let mut rels: Vec<(ExtPoint, Vec<(usize, crate::linalg::Scalar)>)> = Vec::new();

    for c in n.points() {
        let dc = n.dim_at(c).expect("own point");
        let below: Vec<usize> = (0..gens.len()).filter(|&i| gens[i].0.leq(c)).collect();
        let mut eps = Matrix::zeros(f, dc, 0);
        for &i in &below {
            eps = eps.hstack(&(&n.map_between(&gens[i].0, c)? * &gens[i].1))?;
        }
        let fresh = Matrix::extend_basis(&eps, &Matrix::identity(f, dc))?;
        let mut idx = below;
        for k in fresh {
            let v = Matrix::identity(f, dc).select_cols(&[k]);
            eps = eps.hstack(&v)?;
            idx.push(gens.len());
            gens.push((c.clone(), v));
        }

        let kernel = eps.kernel_basis();
        let pos: BTreeMap<usize, usize> = idx.iter().enumerate().map(|(k, &g)| (g, k)).collect();
        let mut inherited = Matrix::zeros(f, idx.len(), 0);
        for (p, coeffs) in &rels {
            if p.leq(c) {
                let mut col = Matrix::zeros(f, idx.len(), 1);
                for (g, v) in coeffs {
                    col.set(pos[g], 0, v.clone());
                }
                inherited = inherited.hstack(&col)?;
            }
        }
        for k in Matrix::extend_basis(&inherited, &kernel)? {
            let coeffs = (0..idx.len())
                .filter(|&r| !kernel.get(r, k).is_zero())
                .map(|r| (idx[r], kernel.get(r, k).clone()))
                .collect();
            rels.push((c.clone(), coeffs));
        }
    }

    let gen_points: Vec<ExtPoint> = gens.iter().map(|g| g.0.clone()).collect();
    let rel_points: Vec<ExtPoint> = rels.iter().map(|r| r.0.clone()).collect();
    let generators = group(&gen_points);
    let relations = group(&rel_points);
    let mut generator_images = Vec::new();
    let mut start = 0;
    for g in &generators {
        let mut block = Matrix::zeros(f, n.dim_at(&g.point).expect("own point"), 0);
        for (_, v) in &gens[start..start + g.multiplicity] {
            block = block.hstack(v)?;
        }
        generator_images.push(block);
        start += g.multiplicity;
    }
    let mut rel_matrix = Matrix::zeros(f, gens.len(), rels.len());
    for (j, (_, coeffs)) in rels.iter().enumerate() {
        for (g, v) in coeffs {
            rel_matrix.set(*g, j, v.clone());
        }
    }
    Ok(Presentation {
        field: f,
        dim: n.ambient_dim(),
        generators,
        generator_images,
        relations,
        rel_matrix,
    })
}

/// Outcome of [`verify_presentation`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PresentationCheck {
    pub holds: bool,
    pub point: Option<ExtPoint>,
    pub reason: Option<String>,
}

impl PresentationCheck {
    fn fail(c: &ExtPoint, reason: impl Into<String>) -> Self {
        PresentationCheck { holds: false, point: Some(c.clone()), reason: Some(reason.into()) }
    }
}

/// Checks exactness of `F^{rel ≤ c} → F^{gen ≤ c} → M̄(c) → 0` at every test
/// point, where generators map to their recorded images, and compatibility of
/// these maps with `M̄` along comparable test points.
pub fn verify_presentation(
    m: &dyn ExtModule,
    p: &Presentation,
    test_points: &PointSet,
) -> Result<PresentationCheck> {
    p.check_shape()?;
    if p.dim != m.ambient_dim() || test_points.dim() != m.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: m.ambient_dim(), found: p.dim });
    }
    let f = m.field();
    let gp = p.generator_points();
    let rp = p.relation_points();
    let mut images: Vec<(&ExtPoint, Matrix)> = Vec::new();
    for (g, img) in p.generators.iter().zip(&p.generator_images) {
        if img.rows() != m.eval_space(&g.point) {
            return Ok(PresentationCheck::fail(&g.point, "generator image has the wrong length"));
        }
        for k in 0..g.multiplicity {
            images.push((&g.point, img.select_cols(&[k])));
        }
    }

    let mut eps_at: BTreeMap<&ExtPoint, (Vec<usize>, Matrix)> = BTreeMap::new();
    for c in test_points.iter() {
        let dc = m.eval_space(c);
        let gi: Vec<usize> = (0..gp.len()).filter(|&i| gp[i].leq(c)).collect();
        let ri: Vec<usize> = (0..rp.len()).filter(|&j| rp[j].leq(c)).collect();
        let mut eps = Matrix::zeros(f, dc, 0);
        for &i in &gi {
            eps = eps.hstack(&(&m.eval_map(images[i].0, c)? * &images[i].1))?;
        }
        let del = p.rel_matrix.select_rows(&gi).select_cols(&ri);
        if !(&eps * &del).is_zero() {
            return Ok(PresentationCheck::fail(c, "relations do not vanish in M̄"));
        }
        if eps.rank() != dc {
            return Ok(PresentationCheck::fail(c, "generators do not span M̄"));
        }
        if del.rank() != gi.len() - dc {
            return Ok(PresentationCheck::fail(c, "relations do not span the kernel"));
        }
        eps_at.insert(c, (gi, eps));
    }
    let pts: Vec<&ExtPoint> = test_points.iter().collect();
    for (i, c) in pts.iter().enumerate() {
        for d in &pts[i + 1..] {
            if !c.leq(d) {
                continue;
            }
            let (gc, ec) = &eps_at[c];
            let (gd, ed) = &eps_at[d];
            let cols: Vec<usize> =
                gc.iter().map(|g| gd.iter().position(|h| h == g).expect("g ≤ c ≤ d")).collect();
            if &m.eval_map(c, d)? * ec != ed.select_cols(&cols) {
                return Ok(PresentationCheck::fail(d, format!("structure map from {c} disagrees")));
            }
        }
    }
    Ok(PresentationCheck { holds: true, point: None, reason: None })
}

fn require_join_closed(l: &PointSet) -> Result<()> {
    if l.is_empty() || hat_closure(l) != *l {
        return Err(Error::Input("the set must be non-empty and closed under joins".into()));
    }
    Ok(())
}

/// `unzip_L N`: `c ↦ N(mub(L ∩ ↓c))`, or `0` when `L ∩ ↓c = ∅`.
#[derive(Clone, Copy, Debug)]
pub struct Unzip<'a> {
    l: &'a PointSet,
    n: &'a PosetDiagram,
}

/// Builds the unzip evaluator; `l` must be join-closed and `n` defined on it.
pub fn unzip<'a>(l: &'a PointSet, n: &'a PosetDiagram) -> Result<Unzip<'a>> {
    require_join_closed(l)?;
    if n.point_set() != *l {
        return Err(Error::Input("diagram is not defined on the given set".into()));
    }
    Ok(Unzip { l, n })
}

impl Unzip<'_> {
    fn anchor(&self, c: &ExtPoint) -> Option<ExtPoint> {
        self.l.covers_from_below(c).then(|| alpha(self.l, c))
    }
}

impl ExtModule for Unzip<'_> {
    fn field(&self) -> FieldSpec {
        self.n.field()
    }

    fn ambient_dim(&self) -> usize {
        self.l.dim()
    }

    fn eval_space(&self, c: &ExtPoint) -> usize {
        self.anchor(c).map_or(0, |a| self.n.dim_at(&a).expect("joins stay in L"))
    }

    fn eval_map(&self, c: &ExtPoint, d: &ExtPoint) -> Result<Matrix> {
        if !c.leq(d) {
            return Err(Error::Precondition(format!("{c} is not below {d}")));
        }
        match (self.anchor(c), self.anchor(d)) {
            (Some(a), Some(b)) => self.n.map_between(&a, &b),
            _ => Ok(Matrix::zeros(self.field(), self.eval_space(d), self.eval_space(c))),
        }
    }
}

/// `zip_L M = res_L M̄`.
pub fn zip(view: &ExtendedView<'_>, l: &PointSet) -> Result<PosetDiagram> {
    require_join_closed(l)?;
    view.restrict_diagram(l)
}

/// Both sides of the admissibility criterion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub unzip_iso: bool,
    pub unzip_failure: Option<ExtPoint>,
    pub determinacy: DeterminacyReport,
}

/// Compares `unzip_L zip_L M` with `M̄` on the critical grid.
///
/// An isomorphism restricts on `L` to an automorphism `ψ` of `res_L M̄`, and
/// naturality along `mub(L ∩ ↓c) ≤ c` forces its remaining components, so it
/// exists iff the components built from `ψ = id` are invertible and natural.
/// Returns the first failing point.
pub fn unzip_comparison(view: &ExtendedView<'_>, l: &PointSet, margin: i64) -> Result<Option<ExtPoint>> {
    let n = zip(view, l)?;
    let u = unzip(l, &n)?;
    let f = view.field();
    let grid = critical_grid(view.grid_box(), l, margin)?;
    let mut phi = BTreeMap::new();
    for c in grid.iter() {
        let dm = view.eval_space(c);
        let comp = match u.anchor(c) {
            Some(a) => view.eval_map(&a, c)?,
            None => Matrix::zeros(f, dm, 0),
        };
        if comp.shape() != (dm, u.eval_space(c)) || !comp.is_invertible() {
            return Ok(Some(c.clone()));
        }
        phi.insert(c.clone(), comp);
    }
    for (c, d, _) in grid.axis_steps()? {
        if &view.eval_map(&c, &d)? * &phi[&c] != &phi[&d] * &u.eval_map(&c, &d)? {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

/// Whether `L` is `M`-admissible, decided both by the unzip comparison and by
/// `L`-determinacy with support; the two must agree.
pub fn is_admissible(m: &GridModule, l: &PointSet, margin: i64) -> Result<AdmissibilityReport> {
    let view = m.view();
    let unzip_failure = unzip_comparison(&view, l, margin)?;
    let determinacy = is_s_determined(&view, l, true, margin)?;
    let unzip_iso = unzip_failure.is_none();
    if unzip_iso != determinacy.holds {
        return Err(Error::Internal(format!(
            "unzip comparison says {unzip_iso}, determinacy says {}",
            determinacy.holds
        )));
    }
    Ok(AdmissibilityReport { admissible: unzip_iso, unzip_iso, unzip_failure, determinacy })
}

/// `μ_c: colim_{t ∈ Ŝ, t ≤ c} M̄(t) → M̄(c)`, the component at `c` of
/// `ind_Ŝ res_Ŝ M̄ → M̄`.
pub fn canonical_comparison(view: &ExtendedView<'_>, s: &PointSet, c: &ExtPoint) -> Result<Matrix> {
    let hat = hat_closure(s);
    let below = PointSet::from_points(s.dim(), hat.below(c).into_iter().cloned())?;
    let sub = view.restrict_diagram(&below)?;
    colimit_comparison(&sub, view.eval_space(c), |t| view.eval_map(t, c))
}

/// Test points used by default for verification: `S̃` together with the
/// critical grid.
pub fn default_test_points(view: &ExtendedView<'_>, s: &PointSet, margin: i64) -> Result<PointSet> {
    tilde_set(s).union(&critical_grid(view.grid_box(), s, margin)?)
}
