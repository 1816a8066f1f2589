//! Order theory of the extended grid `Z̄ⁿ = (Z ∪ {−∞})ⁿ`.
//!
//! Every finite subset of `Z̄ⁿ` has a unique minimal upper bound (the
//! coordinatewise maximum, with the empty set sent to `(−∞,…,−∞)`), and every
//! non-empty finite subset has a unique maximal lower bound. On top of these
//! the module provides the join closure `Ŝ`, the set `S̃ = Ŝ ∪ {min}`, the
//! poset morphisms `α_S(c) = mub(S ∩ ↓c)` and `β_S(c) = mlb(S ∩ ↑c)`, the
//! extended box `S̄` of a cartesian set and the convex projection onto a box.

use std::collections::BTreeSet;
use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

/// A coordinate of `Z̄ = Z ∪ {−∞}`.
///
/// The derived order puts `NegInf` below every integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtCoord {
    NegInf,
    Int(i64),
}

impl ExtCoord {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtCoord::Int(_))
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            ExtCoord::Int(v) => Some(v),
            ExtCoord::NegInf => None,
        }
    }
}

impl From<i64> for ExtCoord {
    fn from(v: i64) -> Self {
        ExtCoord::Int(v)
    }
}

impl fmt::Display for ExtCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtCoord::NegInf => write!(f, "-inf"),
            ExtCoord::Int(v) => write!(f, "{v}"),
        }
    }
}

impl Serialize for ExtCoord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtCoord::NegInf => serializer.serialize_str("-inf"),
            ExtCoord::Int(v) => serializer.serialize_i64(*v),
        }
    }
}

impl<'de> Deserialize<'de> for ExtCoord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct CoordVisitor;

        impl Visitor<'_> for CoordVisitor {
            type Value = ExtCoord;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or the string \"-inf\"")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<ExtCoord, E> {
                Ok(ExtCoord::Int(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<ExtCoord, E> {
                i64::try_from(v)
                    .map(ExtCoord::Int)
                    .map_err(|_| E::custom("coordinate out of range"))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<ExtCoord, E> {
                if v == "-inf" {
                    Ok(ExtCoord::NegInf)
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
        }

        deserializer.deserialize_any(CoordVisitor)
    }
}

/// A point of `Z̄ⁿ`, ordered coordinatewise.
///
/// The derived `Ord` is the lexicographic total order used for canonical
/// output ordering; the poset order is [`ExtPoint::leq`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExtPoint(pub Vec<ExtCoord>);

impl ExtPoint {
    pub fn new(coords: Vec<ExtCoord>) -> Self {
        ExtPoint(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        ExtPoint(coords.iter().map(|&v| ExtCoord::Int(v)).collect())
    }

    /// The minimum `(−∞,…,−∞)` of `Z̄ⁿ`.
    pub fn min(dim: usize) -> Self {
        ExtPoint(vec![ExtCoord::NegInf; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[ExtCoord] {
        &self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    /// Integer coordinates, if there is no `−∞` among them.
    pub fn to_ints(&self) -> Option<Vec<i64>> {
        self.0.iter().map(|c| c.finite()).collect()
    }

    pub fn leq(&self, other: &ExtPoint) -> bool {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn lt(&self, other: &ExtPoint) -> bool {
        self != other && self.leq(other)
    }

    pub fn join(&self, other: &ExtPoint) -> ExtPoint {
        debug_assert_eq!(self.dim(), other.dim());
        ExtPoint(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn meet(&self, other: &ExtPoint) -> ExtPoint {
        debug_assert_eq!(self.dim(), other.dim());
        ExtPoint(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }
}

impl fmt::Display for ExtPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A finite set of points of `Z̄ⁿ`, all of the same dimension.
///
/// When built as a product `S₁ × ⋯ × Sₙ` the factor sets are remembered, which
/// is what `β` and the extended box need.
#[derive(Clone, Debug)]
pub struct PointSet {
    dim: usize,
    points: BTreeSet<ExtPoint>,
    factors: Option<Vec<Vec<ExtCoord>>>,
}

// Equality is set equality; remembered factors do not take part.
impl PartialEq for PointSet {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.points == other.points
    }
}

impl Eq for PointSet {}

impl PointSet {
    pub fn empty(dim: usize) -> Self {
        PointSet { dim, points: BTreeSet::new(), factors: None }
    }

    pub fn from_points<I>(dim: usize, points: I) -> Result<Self>
    where
        I: IntoIterator<Item = ExtPoint>,
    {
        let mut set = PointSet::empty(dim);
        for p in points {
            set.insert(p)?;
        }
        Ok(set)
    }

    /// The product `S₁ × ⋯ × Sₙ` of finite subsets of `Z̄`.
    pub fn cartesian(factors: Vec<Vec<ExtCoord>>) -> Self {
        let factors: Vec<Vec<ExtCoord>> = factors
            .into_iter()
            .map(|f| f.into_iter().collect::<BTreeSet<_>>().into_iter().collect())
            .collect();
        let points = product(&factors).into_iter().collect();
        PointSet { dim: factors.len(), points, factors: Some(factors) }
    }

    pub fn insert(&mut self, p: ExtPoint) -> Result<bool> {
        if p.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: p.dim() });
        }
        let added = self.points.insert(p);
        if added {
            self.factors = None;
        }
        Ok(added)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &ExtPoint) -> bool {
        self.points.contains(p)
    }

    pub fn iter(&self) -> impl Iterator<Item = &ExtPoint> {
        self.points.iter()
    }

    pub fn to_vec(&self) -> Vec<ExtPoint> {
        self.points.iter().cloned().collect()
    }

    pub fn factors(&self) -> Option<&[Vec<ExtCoord>]> {
        self.factors.as_deref()
    }

    pub fn is_cartesian(&self) -> bool {
        self.factors.is_some()
    }

    /// `S ∩ ↓c`.
    pub fn below(&self, c: &ExtPoint) -> Vec<&ExtPoint> {
        self.points.iter().filter(|p| p.leq(c)).collect()
    }

    /// `S ∩ ↑c`.
    pub fn above(&self, c: &ExtPoint) -> Vec<&ExtPoint> {
        self.points.iter().filter(|p| c.leq(p)).collect()
    }

    /// Whether `c ∈ ↑S`.
    pub fn covers_from_below(&self, c: &ExtPoint) -> bool {
        self.points.iter().any(|p| p.leq(c))
    }

    pub fn union(&self, other: &PointSet) -> Result<PointSet> {
        let mut out = self.clone();
        for p in other.iter() {
            out.insert(p.clone())?;
        }
        Ok(out)
    }

    /// Pairs `(c, d)` where `d` advances one coordinate of `c` to the next
    /// value of that factor. Only defined for cartesian sets.
    pub fn axis_steps(&self) -> Result<Vec<(ExtPoint, ExtPoint, usize)>> {
        let factors = self
            .factors
            .as_ref()
            .ok_or_else(|| Error::Precondition("axis steps need a cartesian set".into()))?;
        let mut out = Vec::new();
        for c in &self.points {
            for (axis, factor) in factors.iter().enumerate() {
                let pos = factor.binary_search(&c.0[axis]).expect("point lies in its product");
                if let Some(next) = factor.get(pos + 1) {
                    let mut d = c.clone();
                    d.0[axis] = *next;
                    out.push((c.clone(), d, axis));
                }
            }
        }
        Ok(out)
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = &'a ExtPoint;
    type IntoIter = std::collections::btree_set::Iter<'a, ExtPoint>;

    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

/// All points of `F₁ × ⋯ × Fₙ`, in lexicographic order.
pub fn product(factors: &[Vec<ExtCoord>]) -> Vec<ExtPoint> {
    let mut out = vec![Vec::with_capacity(factors.len())];
    for factor in factors {
        let mut next = Vec::with_capacity(out.len() * factor.len());
        for prefix in &out {
            for v in factor {
                let mut p = prefix.clone();
                p.push(*v);
                next.push(p);
            }
        }
        out = next;
    }
    out.into_iter().map(ExtPoint).collect()
}

/// A closed integer interval `[a, b] ⊂ Zⁿ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridBox {
    pub a: Vec<i64>,
    pub b: Vec<i64>,
}

impl GridBox {
    pub fn new(a: Vec<i64>, b: Vec<i64>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch { expected: a.len(), found: b.len() });
        }
        if a.is_empty() {
            return Err(Error::Input("box must have dimension at least 1".into()));
        }
        if a.iter().zip(&b).any(|(x, y)| x > y) {
            return Err(Error::Input(format!("box corners are not ordered: {a:?} > {b:?}")));
        }
        Ok(GridBox { a, b })
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    /// `u = (1,…,1)`.
    pub fn unit_shift(&self) -> Vec<i64> {
        vec![1; self.dim()]
    }

    /// `[a + u, b]`; fails when some side has length zero.
    pub fn shrink_lower(&self) -> Result<GridBox> {
        let a: Vec<i64> = self.a.iter().zip(self.unit_shift()).map(|(x, u)| x + u).collect();
        if a.iter().zip(&self.b).any(|(x, y)| x > y) {
            return Err(Error::Input(format!(
                "box [{:?},{:?}] is degenerate: a + u exceeds b",
                self.a, self.b
            )));
        }
        GridBox::new(a, self.b.clone())
    }

    pub fn num_points(&self) -> usize {
        self.a.iter().zip(&self.b).map(|(x, y)| (y - x + 1) as usize).product()
    }

    pub fn contains(&self, c: &[i64]) -> bool {
        c.iter().zip(self.a.iter().zip(&self.b)).all(|(v, (lo, hi))| lo <= v && v <= hi)
    }

    /// Lexicographic position of an integer point of the box.
    pub fn index_of(&self, c: &[i64]) -> Option<usize> {
        if c.len() != self.dim() || !self.contains(c) {
            return None;
        }
        let mut idx = 0usize;
        for i in 0..self.dim() {
            let side = (self.b[i] - self.a[i] + 1) as usize;
            idx = idx * side + (c[i] - self.a[i]) as usize;
        }
        Some(idx)
    }

    /// Integer points of the box in lexicographic order.
    pub fn int_points(&self) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::with_capacity(self.dim())];
        for i in 0..self.dim() {
            let mut next = Vec::new();
            for prefix in &out {
                for v in self.a[i]..=self.b[i] {
                    let mut p = prefix.clone();
                    p.push(v);
                    next.push(p);
                }
            }
            out = next;
        }
        out
    }

    /// The box as a cartesian point set.
    pub fn to_point_set(&self) -> PointSet {
        PointSet::cartesian(
            self.a
                .iter()
                .zip(&self.b)
                .map(|(&lo, &hi)| (lo..=hi).map(ExtCoord::Int).collect())
                .collect(),
        )
    }

    /// The integer points of the box plus its `−∞`-faces, i.e. `ext_box([a,b])`.
    pub fn extended(&self) -> PointSet {
        ext_box(&self.to_point_set()).expect("a box is cartesian")
    }

    /// `α = α_{[a,b]‾}` by its coordinatewise formula.
    pub fn alpha(&self, c: &ExtPoint) -> ExtPoint {
        ExtPoint(
            c.0.iter()
                .enumerate()
                .map(|(i, &ci)| match ci {
                    ExtCoord::Int(v) if v < self.a[i] => ExtCoord::NegInf,
                    ExtCoord::Int(v) => ExtCoord::Int(v.min(self.b[i])),
                    ExtCoord::NegInf => ExtCoord::NegInf,
                })
                .collect(),
        )
    }

    /// `β = β_{[a,b]}` on `[a,b]‾`, replacing `−∞` by `aᵢ`.
    pub fn beta(&self, c: &ExtPoint) -> Vec<i64> {
        c.0.iter()
            .enumerate()
            .map(|(i, &ci)| match ci {
                ExtCoord::NegInf => self.a[i],
                ExtCoord::Int(v) => v,
            })
            .collect()
    }

    /// `β ∘ α`, the extension of the convex projection to `Z̄ⁿ`.
    pub fn project_ext(&self, c: &ExtPoint) -> Vec<i64> {
        self.beta(&self.alpha(c))
    }
}

/// Minimal upper bound: the coordinatewise maximum, `(−∞,…,−∞)` for the empty set.
pub fn mub(points: &PointSet) -> ExtPoint {
    mub_iter(points.dim(), points.iter())
}

pub(crate) fn mub_iter<'a, I>(dim: usize, points: I) -> ExtPoint
where
    I: IntoIterator<Item = &'a ExtPoint>,
{
    points.into_iter().fold(ExtPoint::min(dim), |acc, p| acc.join(p))
}

/// Maximal lower bound: the coordinatewise minimum of a non-empty set.
pub fn mlb(points: &PointSet) -> Result<ExtPoint> {
    let mut it = points.iter();
    let first = it
        .next()
        .ok_or_else(|| Error::Precondition("mlb of an empty set does not exist in Z̄ⁿ".into()))?;
    Ok(it.fold(first.clone(), |acc, p| acc.meet(p)))
}

/// `Ŝ`: minimal upper bounds of all non-empty subsets, as a pairwise-join fixpoint.
pub fn hat_closure(s: &PointSet) -> PointSet {
    let mut closed: BTreeSet<ExtPoint> = s.points.clone();
    let mut frontier: Vec<ExtPoint> = closed.iter().cloned().collect();
    while !frontier.is_empty() {
        let mut fresh = Vec::new();
        for f in &frontier {
            for base in s.iter() {
                let j = f.join(base);
                if !closed.contains(&j) {
                    closed.insert(j.clone());
                    fresh.push(j);
                }
            }
        }
        frontier = fresh;
    }
    PointSet { dim: s.dim, points: closed, factors: None }
}

/// `S̃ = Ŝ ∪ {(−∞,…,−∞)}`.
pub fn tilde_set(s: &PointSet) -> PointSet {
    let mut out = hat_closure(s);
    out.points.insert(ExtPoint::min(s.dim));
    if let Some(f) = ext_factors_if_closed(s) {
        out.factors = Some(f);
    }
    out
}

// A cartesian set whose factors all contain −∞ is its own S̃.
fn ext_factors_if_closed(s: &PointSet) -> Option<Vec<Vec<ExtCoord>>> {
    let f = s.factors.as_ref()?;
    f.iter().all(|axis| axis.first() == Some(&ExtCoord::NegInf)).then(|| f.clone())
}

/// `α_S(c) = mub(S ∩ ↓c)`.
pub fn alpha(s: &PointSet, c: &ExtPoint) -> ExtPoint {
    mub_iter(s.dim, s.iter().filter(|p| p.leq(c)))
}

/// `β_S(c) = mlb(S ∩ ↑c)` for a cartesian `S` and `c ∈ S̄`.
pub fn beta(s: &PointSet, c: &ExtPoint) -> Result<ExtPoint> {
    let factors = s
        .factors
        .as_ref()
        .ok_or_else(|| Error::Precondition("beta needs a cartesian set".into()))?;
    if c.dim() != s.dim {
        return Err(Error::DimensionMismatch { expected: s.dim, found: c.dim() });
    }
    let mut out = Vec::with_capacity(s.dim);
    for (axis, (&ci, factor)) in c.0.iter().zip(factors).enumerate() {
        if ci.is_finite() && factor.binary_search(&ci).is_err() {
            return Err(Error::Precondition(format!(
                "{c} is not in the extended box (axis {})",
                axis + 1
            )));
        }
        let v = factor.iter().copied().find(|v| *v >= ci).ok_or_else(|| {
            Error::Precondition(format!("{c} has nothing above it on axis {}", axis + 1))
        })?;
        out.push(v);
    }
    Ok(ExtPoint(out))
}

/// `S̄ = (S₁ ∪ {−∞}) × ⋯ × (Sₙ ∪ {−∞})` for a cartesian `S`.
pub fn ext_box(s: &PointSet) -> Result<PointSet> {
    let factors = s
        .factors
        .as_ref()
        .ok_or_else(|| Error::Precondition("ext_box needs a cartesian set".into()))?;
    Ok(PointSet::cartesian(
        factors
            .iter()
            .map(|f| {
                let mut f = f.clone();
                f.push(ExtCoord::NegInf);
                f
            })
            .collect(),
    ))
}

/// Convex projection `πᵢ(cᵢ) = max(aᵢ, min(cᵢ, bᵢ))` on `Zⁿ`.
pub fn convex_projection(bx: &GridBox, c: &ExtPoint) -> Result<ExtPoint> {
    if c.dim() != bx.dim() {
        return Err(Error::DimensionMismatch { expected: bx.dim(), found: c.dim() });
    }
    let ints = c.to_ints().ok_or_else(|| {
        Error::Precondition(format!("convex projection is defined on Zⁿ only, got {c}"))
    })?;
    Ok(ExtPoint::from_ints(
        &ints
            .iter()
            .enumerate()
            .map(|(i, &v)| v.clamp(bx.a[i], bx.b[i]))
            .collect::<Vec<_>>(),
    ))
}

/// Finite grid on which box-determined data and `S ∩ ↓c` are both
/// represented: per axis `{−∞} ∪ [aᵢ−m, bᵢ+m] ∪ {sᵢ−1, sᵢ}`.
pub fn critical_grid(bx: &GridBox, s: &PointSet, margin: i64) -> Result<PointSet> {
    if s.dim() != bx.dim() {
        return Err(Error::DimensionMismatch { expected: bx.dim(), found: s.dim() });
    }
    let margin = margin.max(0);
    let factors = (0..bx.dim())
        .map(|i| {
            let mut axis: BTreeSet<ExtCoord> = BTreeSet::new();
            axis.insert(ExtCoord::NegInf);
            for v in (bx.a[i] - margin)..=(bx.b[i] + margin) {
                axis.insert(ExtCoord::Int(v));
            }
            for p in s.iter() {
                if let ExtCoord::Int(v) = p.0[i] {
                    axis.insert(ExtCoord::Int(v - 1));
                    axis.insert(ExtCoord::Int(v));
                }
            }
            axis.into_iter().collect()
        })
        .collect();
    Ok(PointSet::cartesian(factors))
}

#[cfg(test)]
mod tests {
    use super::*;

    const NI: ExtCoord = ExtCoord::NegInf;

    fn p(c: &[ExtCoord]) -> ExtPoint {
        ExtPoint(c.to_vec())
    }

    fn i(v: i64) -> ExtCoord {
        ExtCoord::Int(v)
    }

    fn set(points: &[&[ExtCoord]]) -> PointSet {
        PointSet::from_points(points[0].len(), points.iter().map(|c| p(c))).unwrap()
    }

    // Brute-force minimal upper bounds over a window.
    fn brute_mubs(points: &[ExtPoint], axis: &[ExtCoord]) -> Vec<ExtPoint> {
        let n = points[0].dim();
        let window = product(&vec![axis.to_vec(); n]);
        let ubs: Vec<&ExtPoint> =
            window.iter().filter(|u| points.iter().all(|q| q.leq(u))).collect();
        ubs.iter()
            .filter(|u| !ubs.iter().any(|v| ExtPoint::lt(v, u)))
            .map(|u| (*u).clone())
            .collect()
    }

    fn brute_mlbs(points: &[ExtPoint], axis: &[ExtCoord]) -> Vec<ExtPoint> {
        let n = points[0].dim();
        let window = product(&vec![axis.to_vec(); n]);
        let lbs: Vec<&ExtPoint> =
            window.iter().filter(|u| points.iter().all(|q| u.leq(q))).collect();
        lbs.iter()
            .filter(|u| !lbs.iter().any(|v| ExtPoint::lt(u, v)))
            .map(|u| (*u).clone())
            .collect()
    }

    fn window_axis() -> Vec<ExtCoord> {
        std::iter::once(NI).chain((-4..=4).map(i)).collect()
    }

    #[test]
    fn mub_examples() {
        assert_eq!(mub(&set(&[&[i(1), i(2)], &[i(3), i(0)]])), p(&[i(3), i(2)]));
        assert_eq!(mub(&set(&[&[i(5), NI]])), p(&[i(5), NI]));
        let s = [p(&[NI, i(1)]), p(&[i(2), NI]), p(&[i(0), i(0)])];
        let brute = brute_mubs(&s, &window_axis());
        assert_eq!(brute, vec![p(&[i(2), i(1)])]);
        assert_eq!(mub(&PointSet::from_points(2, s).unwrap()), brute[0]);
        assert_eq!(mub(&PointSet::empty(3)), ExtPoint::min(3));
    }

    #[test]
    fn mlb_examples() {
        assert_eq!(mlb(&set(&[&[i(1), i(2)], &[i(3), i(0)]])).unwrap(), p(&[i(1), i(0)]));
        assert_eq!(mlb(&set(&[&[i(0), i(0)]])).unwrap(), p(&[i(0), i(0)]));
        let s = [p(&[NI, i(1)]), p(&[i(2), i(3)])];
        let brute = brute_mlbs(&s, &window_axis());
        assert_eq!(brute, vec![p(&[NI, i(1)])]);
        assert_eq!(mlb(&PointSet::from_points(2, s).unwrap()).unwrap(), brute[0]);
        assert!(matches!(mlb(&PointSet::empty(2)), Err(Error::Precondition(_))));
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let mut s = PointSet::empty(2);
        assert_eq!(
            s.insert(p(&[i(1)])),
            Err(Error::DimensionMismatch { expected: 2, found: 1 })
        );
    }

    // Exhaustive n ≤ 3 over a small alphabet, pairs of points.
    #[test]
    fn mub_mlb_match_brute_force_exhaustively() {
        let axis: Vec<ExtCoord> = std::iter::once(NI).chain((-3..=3).map(i)).collect();
        let small: Vec<ExtCoord> = vec![NI, i(-1), i(0), i(2)];
        for n in 1..=3usize {
            let pts = product(&vec![small.clone(); n]);
            for x in &pts {
                for y in &pts {
                    let s = PointSet::from_points(n, [x.clone(), y.clone()]).unwrap();
                    let v = [x.clone(), y.clone()];
                    assert_eq!(brute_mubs(&v, &axis), vec![mub(&s)]);
                    assert_eq!(brute_mlbs(&v, &axis), vec![mlb(&s).unwrap()]);
                }
            }
        }
    }

    fn subset_oracle(s: &PointSet) -> PointSet {
        let pts = s.to_vec();
        let mut out = PointSet::empty(s.dim());
        for mask in 1u32..(1 << pts.len()) {
            let chosen = pts.iter().enumerate().filter(|(k, _)| mask & (1 << k) != 0);
            out.insert(mub_iter(s.dim(), chosen.map(|(_, q)| q))).unwrap();
        }
        out
    }

    #[test]
    fn hat_closure_examples() {
        let h = hat_closure(&set(&[&[i(1), i(0)], &[i(0), i(1)]]));
        assert_eq!(h.to_vec(), vec![p(&[i(0), i(1)]), p(&[i(1), i(0)]), p(&[i(1), i(1)])]);
        assert_eq!(h, subset_oracle(&set(&[&[i(1), i(0)], &[i(0), i(1)]])));
        assert_eq!(hat_closure(&set(&[&[i(2), i(2)]])).to_vec(), vec![p(&[i(2), i(2)])]);
    }

    #[test]
    fn tilde_set_examples() {
        let t = tilde_set(&set(&[&[i(1), i(1)]]));
        assert_eq!(t.to_vec(), vec![p(&[NI, NI]), p(&[i(1), i(1)])]);
        let s = set(&[&[i(1), NI], &[NI, i(1)]]);
        let t = tilde_set(&s);
        let mut oracle = subset_oracle(&s);
        oracle.insert(ExtPoint::min(2)).unwrap();
        assert_eq!(t.to_vec(), oracle.to_vec());
        assert_eq!(t.len(), 4);
        let eb = GridBox::new(vec![1, 1], vec![1, 1]).unwrap().extended();
        assert_eq!(tilde_set(&eb).to_vec(), eb.to_vec());
    }

    #[test]
    fn alpha_examples() {
        let s = GridBox::new(vec![0, 0], vec![1, 1]).unwrap().extended();
        assert_eq!(alpha(&s, &p(&[i(-3), i(5)])), p(&[NI, i(1)]));
        let s2 = set(&[&[i(0), i(0)], &[i(2), i(1)]]);
        assert_eq!(alpha(&s2, &p(&[i(-1), i(9)])), ExtPoint::min(2));
    }

    #[test]
    fn beta_examples() {
        let bx = GridBox::new(vec![0, 0], vec![1, 1]).unwrap();
        let s = bx.to_point_set();
        assert_eq!(beta(&s, &p(&[NI, i(1)])).unwrap(), p(&[i(0), i(1)]));
        for c in s.iter() {
            assert_eq!(&beta(&s, c).unwrap(), c);
        }
        assert!(matches!(beta(&s, &p(&[i(5), i(0)])), Err(Error::Precondition(_))));
        let non_cart = set(&[&[i(0), i(0)], &[i(1), i(1)]]);
        assert!(beta(&non_cart, &p(&[i(0), i(0)])).is_err());
    }

    #[test]
    fn beta_matches_brute_force_on_cartesian_sets() {
        let factors = vec![vec![i(-1), i(1), i(2)], vec![i(0), i(3)]];
        let s = PointSet::cartesian(factors);
        for c in ext_box(&s).unwrap().iter() {
            let up = PointSet::from_points(2, s.above(c).into_iter().cloned()).unwrap();
            assert_eq!(beta(&s, c).unwrap(), mlb(&up).unwrap());
        }
    }

    #[test]
    fn ext_box_examples() {
        let one = GridBox::new(vec![1, 1], vec![1, 1]).unwrap().extended();
        assert_eq!(
            one.to_vec(),
            vec![p(&[NI, NI]), p(&[NI, i(1)]), p(&[i(1), NI]), p(&[i(1), i(1)])]
        );
        let zero = GridBox::new(vec![0, 0], vec![0, 0]).unwrap().extended();
        assert_eq!(
            zero.to_vec(),
            vec![p(&[NI, NI]), p(&[NI, i(0)]), p(&[i(0), NI]), p(&[i(0), i(0)])]
        );
        for (a, b) in [(vec![0, 0], vec![2, 1]), (vec![-1, 0, 2], vec![0, 2, 2])] {
            let bx = GridBox::new(a.clone(), b.clone()).unwrap();
            let expect: i64 = a.iter().zip(&b).map(|(x, y)| y - x + 2).product();
            assert_eq!(bx.extended().len() as i64, expect);
        }
        assert!(ext_box(&set(&[&[i(0), i(0)], &[i(1), i(1)]])).is_err());
    }

    #[test]
    fn convex_projection_examples() {
        let bx = GridBox::new(vec![0, 0], vec![1, 1]).unwrap();
        assert_eq!(convex_projection(&bx, &p(&[i(-3), i(5)])).unwrap(), p(&[i(0), i(1)]));
        assert_eq!(convex_projection(&bx, &p(&[i(1), i(0)])).unwrap(), p(&[i(1), i(0)]));
        assert!(convex_projection(&bx, &p(&[NI, i(0)])).is_err());
        let eb = bx.extended();
        let base = bx.to_point_set();
        for x in -5..=5 {
            for y in -5..=5 {
                let c = p(&[i(x), i(y)]);
                let via = beta(&base, &alpha(&eb, &c)).unwrap();
                assert_eq!(convex_projection(&bx, &c).unwrap(), via);
            }
        }
    }

    #[test]
    fn critical_grid_examples() {
        let bx = GridBox::new(vec![0, 0], vec![1, 1]).unwrap();
        let g = critical_grid(&bx, &set(&[&[i(1), i(1)]]), 1).unwrap();
        let axis = vec![NI, i(-1), i(0), i(1), i(2)];
        assert_eq!(g.factors().unwrap(), &[axis.clone(), axis]);
        let g0 = critical_grid(&bx, &PointSet::empty(2), 1).unwrap();
        assert_eq!(g0.len(), 25);
        let s = set(&[&[i(7), NI], &[i(-4), i(3)]]);
        let g = critical_grid(&bx, &s, 1).unwrap();
        assert!(s.iter().all(|q| g.contains(q)));
        assert!(bx.extended().iter().all(|q| g.contains(q)));
    }

    #[test]
    fn box_formulas_agree_with_set_definitions() {
        let bx = GridBox::new(vec![-1, 0], vec![1, 2]).unwrap();
        let eb = bx.extended();
        let base = bx.to_point_set();
        let axis: Vec<ExtCoord> = std::iter::once(NI).chain((-4..=4).map(i)).collect();
        for c in product(&[axis.clone(), axis]) {
            let a = alpha(&eb, &c);
            assert_eq!(bx.alpha(&c), a);
            assert_eq!(ExtPoint::from_ints(&bx.beta(&a)), beta(&base, &a).unwrap());
        }
    }

    #[test]
    fn serde_round_trip_of_points() {
        let q = p(&[i(1), NI]);
        let text = serde_json::to_string(&q).unwrap();
        assert_eq!(text, r#"[1,"-inf"]"#);
        assert_eq!(serde_json::from_str::<ExtPoint>(&text).unwrap(), q);
        assert!(serde_json::from_str::<ExtPoint>(r#"["inf"]"#).is_err());
    }
}
