//! The non-commutative grading group G, spin^c classes, the planar picture of
//! the meridian module, and the spin^c-sorted knot Floer homology of the meridian.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::ops::Mul;

use crate::algebra::{Chord, Idem};
use crate::builders;
use crate::cfk::{self, CfkComplex};
use crate::error::{Error, Result};
use crate::modules::{DModule, Role};
use crate::pairing::{self, FillingModule, TensorComplex};

/// An element `(j; p, q)` of G.
///
/// `p` and `q` are half-integers stored doubled; `j` is stored quadrupled so the
/// group is closed under products of arbitrary half-integer triples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GradingElement {
    j4: i64,
    p2: i64,
    q2: i64,
}

impl GradingElement {
    pub fn identity() -> Self {
        GradingElement { j4: 0, p2: 0, q2: 0 }
    }

    /// The central element λ = (1; 0, 0).
    pub fn lambda() -> Self {
        GradingElement { j4: 4, p2: 0, q2: 0 }
    }

    /// Builds `(j/2; p/2, q/2)` from doubled coordinates.
    pub fn from_halves(j2: i64, p2: i64, q2: i64) -> Self {
        GradingElement { j4: 2 * j2, p2, q2 }
    }

    /// Builds `(j/4; p/2, q/2)`.
    pub fn from_raw(j4: i64, p2: i64, q2: i64) -> Self {
        GradingElement { j4, p2, q2 }
    }

    pub fn j4(&self) -> i64 {
        self.j4
    }

    pub fn p2(&self) -> i64 {
        self.p2
    }

    pub fn q2(&self) -> i64 {
        self.q2
    }

    pub fn inverse(&self) -> Self {
        GradingElement { j4: -self.j4, p2: -self.p2, q2: -self.q2 }
    }

    /// The spin^c part `(p, q)` in doubled coordinates.
    pub fn spin(&self) -> (i64, i64) {
        (self.p2, self.q2)
    }
}

impl Mul for GradingElement {
    type Output = GradingElement;

    /// `(j₁;p₁,q₁)·(j₂;p₂,q₂) = (j₁+j₂+p₁q₂−q₁p₂; p₁+p₂, q₁+q₂)`.
    fn mul(self, rhs: GradingElement) -> GradingElement {
        GradingElement {
            j4: self.j4 + rhs.j4 + self.p2 * rhs.q2 - self.q2 * rhs.p2,
            p2: self.p2 + rhs.p2,
            q2: self.q2 + rhs.q2,
        }
    }
}

fn fmt_quarter(f: &mut fmt::Formatter<'_>, v: i64, denom: i64) -> fmt::Result {
    let g = gcd(v.abs(), denom);
    let (num, den) = (v / g, denom / g);
    if den == 1 {
        write!(f, "{num}")
    } else {
        write!(f, "{num}/{den}")
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

impl fmt::Display for GradingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        fmt_quarter(f, self.j4, 4)?;
        f.write_str("; ")?;
        fmt_quarter(f, self.p2, 2)?;
        f.write_str(", ")?;
        fmt_quarter(f, self.q2, 2)?;
        f.write_str(")")
    }
}

/// A spin^c class: `(p, q)` modulo the lattice spanned by `(−n, −1)` and `(0, 1)`.
///
/// Since `(0,1)` lies in the lattice, so does `(−n, 0)`, and the class is the
/// pair `(p mod n, q mod 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpincClass {
    n: i64,
    p2: i64,
    q2: i64,
}

impl SpincClass {
    /// Canonical class of a doubled spin^c pair for surgery coefficient `−n`.
    pub fn new(n: i64, p2: i64, q2: i64) -> Self {
        assert!(n > 0, "spin^c classes need n > 0");
        SpincClass { n, p2: p2.rem_euclid(2 * n), q2: q2.rem_euclid(2) }
    }

    pub fn of(n: i64, g: &GradingElement) -> Self {
        SpincClass::new(n, g.p2, g.q2)
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    /// Doubled `p` representative in `[0, 2n)`.
    pub fn p2(&self) -> i64 {
        self.p2
    }

    /// Doubled `q` representative in `{0, 1}`.
    pub fn q2(&self) -> i64 {
        self.q2
    }
}

impl fmt::Display for SpincClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        fmt_quarter(f, self.p2, 2)?;
        f.write_str(", ")?;
        fmt_quarter(f, self.q2, 2)?;
        write!(f, "] mod n={}", self.n)
    }
}

/// Grading of the target of an edge `x → y` labeled by a chord `c`:
/// `gr(y) = λ⁻¹·gr(c)⁻¹·gr(x)`.
pub fn step(from: GradingElement, c: Chord) -> GradingElement {
    GradingElement::lambda().inverse() * c.grading().inverse() * from
}

/// Inverse of [`step`]: recovers `gr(x)` from `gr(y)`.
pub fn step_back(to: GradingElement, c: Chord) -> GradingElement {
    c.grading() * GradingElement::lambda() * to
}

/// Relative gradings of a type-D module over the σ-algebra.
///
/// Each connected component is anchored at its first generator (or at `base`
/// for the component containing it) with the identity. When two paths reach a
/// generator, the spin^c parts of the candidates must agree modulo the lattice
/// for `n`; otherwise an [`Error::InconsistentGrading`] names the conflict.
pub fn propagate(d: &DModule, n: i64, base: Option<usize>) -> Result<Vec<GradingElement>> {
    let count = d.generators.len();
    let mut adj: Vec<Vec<(usize, Chord, bool)>> = vec![Vec::new(); count];
    for (&(a, b), label) in &d.edges {
        for c in label.terms() {
            adj[a].push((b, c, true));
            adj[b].push((a, c, false));
        }
    }
    let mut gr: Vec<Option<GradingElement>> = vec![None; count];
    let order: Vec<usize> = base.into_iter().chain(0..count).collect();
    for start in order {
        if gr[start].is_some() {
            continue;
        }
        gr[start] = Some(GradingElement::identity());
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            let gx = gr[x].expect("queued generators are graded");
            for &(y, c, forward) in &adj[x] {
                let cand = if forward { step(gx, c) } else { step_back(gx, c) };
                match gr[y] {
                    None => {
                        gr[y] = Some(cand);
                        queue.push_back(y);
                    }
                    Some(existing) => {
                        if SpincClass::of(n, &existing) != SpincClass::of(n, &cand) {
                            return Err(Error::InconsistentGrading(format!(
                                "generator `{}` reached with spin^c parts {} and {} (via `{}`)",
                                d.generators[y].name,
                                SpincClass::of(n, &existing),
                                SpincClass::of(n, &cand),
                                d.generators[x].name
                            )));
                        }
                    }
                }
            }
        }
    }
    Ok(gr.into_iter().map(|g| g.expect("every generator visited")).collect())
}

/// Buckets the ĵ₁ generators of `d` by spin^c class.
pub fn spinc_sort(d: &DModule, n: i64) -> Result<BTreeMap<SpincClass, Vec<usize>>> {
    let gr = propagate(d, n, None)?;
    let mut out: BTreeMap<SpincClass, Vec<usize>> = BTreeMap::new();
    for (i, g) in d.generators.iter().enumerate() {
        if g.idem == Idem::I1 {
            out.entry(SpincClass::of(n, &gr[i])).or_default().push(i);
        }
    }
    Ok(out)
}

/// A point of the (q, r)-plane with doubled coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point2 {
    pub q2: i64,
    pub r2: i64,
}

impl Point2 {
    /// The `k` with `−q + r = k + 1/2`, if the point lies on such a line.
    pub fn line(&self) -> Option<i64> {
        let diff = self.r2 - self.q2;
        (diff.rem_euclid(2) == 1).then(|| (diff - 1) / 2)
    }
}

/// Coordinates of every generator of a meridian module in the (q, r)-plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanarPlacement {
    pub n: i64,
    pub coords: Vec<Point2>,
}

impl PlanarPlacement {
    /// Number of generators on the line `L_k`. Only `k` in [`k_range`] index
    /// lines; any other `k` gives 0. Placed points are matched modulo `n`.
    pub fn line_count(&self, k: i64) -> usize {
        if !k_range(self.n).contains(&k) {
            return 0;
        }
        self.coords.iter().filter_map(Point2::line).filter(|&l| wrap_k(l, self.n) == k).count()
    }

    /// The canonical line index of generator `i`, if it lies on a line.
    pub fn line_of(&self, i: usize) -> Option<i64> {
        self.coords[i].line().map(|l| wrap_k(l, self.n))
    }
}

/// The range of `k` indexing spin^c summands: `[−n/2, n/2 − 1]` for even `n`
/// and `[−⌊n/2⌋, ⌊n/2⌋]` for odd `n`.
pub fn k_range(n: i64) -> std::ops::RangeInclusive<i64> {
    if n % 2 == 0 {
        -(n / 2)..=(n / 2 - 1)
    } else {
        -(n / 2)..=(n / 2)
    }
}

/// Reduces `k` modulo `n` into [`k_range`].
pub fn wrap_k(k: i64, n: i64) -> i64 {
    let lo = *k_range(n).start();
    (k - lo).rem_euclid(n) + lo
}

/// Places a CFK generator at `(−s, A − s)`, choosing the shift `s` so that
/// vertical arrows are vertical and horizontal arrows horizontal.
fn cfk_positions(c: &CfkComplex) -> Result<Vec<Point2>> {
    let arrows = cfk::arrows_of(c)?;
    let count = c.generators.len();
    let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); count];
    for a in &arrows.vertical {
        adj[a.source].push((a.target, 0));
        adj[a.target].push((a.source, 0));
    }
    for a in &arrows.horizontal {
        adj[a.source].push((a.target, a.length as i64));
        adj[a.target].push((a.source, -(a.length as i64)));
    }
    let mut shift: Vec<Option<i64>> = vec![None; count];
    for start in 0..count {
        if shift[start].is_some() {
            continue;
        }
        shift[start] = Some(0);
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            let sx = shift[x].expect("queued");
            for &(y, delta) in &adj[x] {
                let want = sx + delta;
                match shift[y] {
                    None => {
                        shift[y] = Some(want);
                        queue.push_back(y);
                    }
                    Some(s) if s != want => {
                        return Err(Error::PlacementConflict(format!(
                            "CFK generator `{}` needs shifts {s} and {want}",
                            c.generators[y].name
                        )))
                    }
                    Some(_) => {}
                }
            }
        }
    }
    Ok(c
        .generators
        .iter()
        .zip(shift)
        .map(|(g, s)| {
            let s = s.expect("all visited");
            Point2 { q2: -2 * s, r2: 2 * (g.alexander as i64 - s) }
        })
        .collect())
}

/// Places the generators of the meridian module built from `cfk` at framing `−n`.
///
/// ∞-generators sit at their CFK position; vertical chain interiors start half a
/// step below and continue in unit steps; horizontal interiors start half a step
/// to the left; the first half of the unstable chain extends leftwards from the
/// horizontally distinguished generator and the rest downwards from the
/// vertically distinguished one.
pub fn planar_embed(cfd: &DModule, cfk_complex: &CfkComplex, n: i64) -> Result<PlanarPlacement> {
    let pos = cfk_positions(cfk_complex)?;
    let arrows = cfk::arrows_of(cfk_complex)?;
    let tau = cfk_complex.generators[arrows.x0].alexander as i64;
    let m = n + 2 * tau;
    let h = pos[arrows.y0];
    let v = pos[arrows.x0];
    let mut coords = Vec::with_capacity(cfd.generators.len());
    for g in &cfd.generators {
        let role = g.role.ok_or_else(|| {
            Error::PlacementConflict(format!("generator `{}` carries no construction role", g.name))
        })?;
        let p = match role {
            Role::Inf(x) => pos[x],
            Role::Zero(x) => pos[x],
            Role::Tail(x, i) if i > 0 => {
                let i = i as i64;
                Point2 { q2: pos[x].q2, r2: pos[x].r2 - 1 - 2 * (i - 1) }
            }
            Role::Tail(x, i) => {
                let i = -(i as i64);
                Point2 { q2: pos[x].q2 - 1 - 2 * (i - 1), r2: pos[x].r2 }
            }
            Role::Gamma(mu) => {
                let mu = mu as i64;
                if 2 * mu <= m {
                    Point2 { q2: h.q2 - 1 - 2 * (mu - 1), r2: h.r2 }
                } else {
                    Point2 { q2: v.q2, r2: v.r2 - 1 - 2 * (m - mu) }
                }
            }
        };
        coords.push(p);
    }
    Ok(PlanarPlacement { n, coords })
}

/// How [`hfk_meridian`] obtains its table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HfkMethod {
    /// Spin^c classes from grading propagation, ranks from the knot complex.
    Grading,
    /// Lines `L_k` of the planar picture, ranks from the knot complex restricted to each line.
    Planar,
    /// `rank H(Ĉ/F(K,k)) + rank H(Ĉ/F(K,−k−1))` straight from the CFK complex.
    Oracle,
}

impl HfkMethod {
    pub const ALL: [HfkMethod; 3] = [HfkMethod::Grading, HfkMethod::Planar, HfkMethod::Oracle];

    pub fn name(self) -> &'static str {
        match self {
            HfkMethod::Grading => "grading",
            HfkMethod::Planar => "planar",
            HfkMethod::Oracle => "oracle",
        }
    }
}

impl std::str::FromStr for HfkMethod {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "grading" => Ok(HfkMethod::Grading),
            "planar" => Ok(HfkMethod::Planar),
            "oracle" => Ok(HfkMethod::Oracle),
            other => Err(format!("unknown method `{other}` (grading|planar|oracle)")),
        }
    }
}

/// A table `k ↦ rank`, one row per spin^c summand.
pub type HfkTable = BTreeMap<i64, usize>;

/// Everything the meridian pipeline produces for one knot and one `n`.
#[derive(Clone, Debug)]
pub struct MeridianPipeline {
    pub n: i64,
    pub cfd: DModule,
    pub complex: TensorComplex,
    pub placement: PlanarPlacement,
}

/// Builds the reduced DD module at framing `−n`, pairs it with the 0-filling and
/// then with the ∞-filling.
pub fn meridian_pipeline(c: &CfkComplex, n: i64) -> Result<MeridianPipeline> {
    if n < 1 {
        return Err(Error::UnsupportedFraming(format!("n = {n} must be positive")));
    }
    let tau = cfk::tau(c)?;
    if n + 2 * tau < 1 {
        return Err(Error::UnsupportedFraming(format!(
            "n = {n} is too small for τ = {tau}: need n + 2τ ≥ 1"
        )));
    }
    let dd = builders::build_dd_reduced(c, -n)?;
    let cfd = pairing::box_tensor_left(&FillingModule::h0(), &dd)?;
    let complex = pairing::box_tensor_final(&FillingModule::hinf(), &cfd)?;
    let placement = planar_embed(&cfd, c, n)?;
    Ok(MeridianPipeline { n, cfd, complex, placement })
}

/// Maps each tensor-complex generator back to its index in the meridian module.
fn complex_to_cfd(p: &MeridianPipeline) -> Vec<usize> {
    p.complex.origin.clone()
}

/// Spin^c-sorted ĤFK of the meridian in the surgery on `c` with coefficient `−n`.
pub fn hfk_meridian(c: &CfkComplex, n: i64, method: HfkMethod) -> Result<HfkTable> {
    if method == HfkMethod::Oracle {
        return Ok(oracle_table(c, n));
    }
    let p = meridian_pipeline(c, n)?;
    match method {
        HfkMethod::Planar => planar_table(&p),
        HfkMethod::Grading => grading_table(&p),
        HfkMethod::Oracle => unreachable!(),
    }
}

/// Row `k` is `r(k) + r(−k−1)` where `r` is [`cfk::quotient_homology_rank`].
pub fn oracle_table(c: &CfkComplex, n: i64) -> HfkTable {
    k_range(n)
        .map(|k| {
            (k, cfk::quotient_homology_rank(c, k) + cfk::quotient_homology_rank(c, -k - 1))
        })
        .collect()
}

fn planar_table(p: &MeridianPipeline) -> Result<HfkTable> {
    let origin = complex_to_cfd(p);
    let mut table: HfkTable = k_range(p.n).map(|k| (k, 0)).collect();
    let mut by_line: BTreeMap<i64, BTreeSet<usize>> = BTreeMap::new();
    for (i, &o) in origin.iter().enumerate() {
        let k = p.placement.line_of(o).ok_or_else(|| {
            Error::PlacementConflict(format!(
                "ĵ₁ generator `{}` is not on a line L_k",
                p.cfd.generators[o].name
            ))
        })?;
        by_line.entry(k).or_default().insert(i);
    }
    for (k, members) in by_line {
        let rank = p.complex.knot_homology_rank(Some(&members))?;
        *table.entry(k).or_default() += rank;
    }
    Ok(table)
}

fn grading_table(p: &MeridianPipeline) -> Result<HfkTable> {
    let buckets = spinc_sort(&p.cfd, p.n)?;
    let origin = complex_to_cfd(p);
    let mut cfd_to_complex: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, &o) in origin.iter().enumerate() {
        cfd_to_complex.insert(o, i);
    }
    let mut table: HfkTable = k_range(p.n).map(|k| (k, 0)).collect();
    let Some((anchor_class, anchor_members)) = buckets.iter().next() else {
        return Ok(table);
    };
    let anchor = anchor_members[0];
    let anchor_k = p.placement.line_of(anchor).ok_or_else(|| {
        Error::PlacementConflict(format!("anchor `{}` is off the lines", p.cfd.generators[anchor].name))
    })?;
    for (class, members) in &buckets {
        let dp = class.p2() - anchor_class.p2();
        if dp.rem_euclid(2) != 0 || class.q2() != anchor_class.q2() {
            return Err(Error::InconsistentGrading(format!(
                "class {class} is not an integral translate of the anchor class {anchor_class}"
            )));
        }
        let k = wrap_k(anchor_k + dp / 2, p.n);
        let set: BTreeSet<usize> = members.iter().map(|m| cfd_to_complex[m]).collect();
        let rank = p.complex.knot_homology_rank(Some(&set))?;
        *table.entry(k).or_default() += rank;
    }
    Ok(table)
}

/// Rows on which two tables disagree, as `(k, left, right)`.
pub fn table_diff(a: &HfkTable, b: &HfkTable) -> Vec<(i64, usize, usize)> {
    let keys: BTreeSet<i64> = a.keys().chain(b.keys()).copied().collect();
    keys.into_iter()
        .filter_map(|k| {
            let (x, y) = (a.get(&k).copied().unwrap_or(0), b.get(&k).copied().unwrap_or(0));
            (x != y).then_some((k, x, y))
        })
        .collect()
}

/// Runs all three methods and reports [`Error`]-free disagreements as a list of
/// `(method, k, rank, oracle rank)` rows; an empty list means agreement.
pub fn compare_methods(c: &CfkComplex, n: i64) -> Result<(BTreeMap<HfkMethod, HfkTable>, Vec<String>)> {
    let mut tables = BTreeMap::new();
    for m in HfkMethod::ALL {
        tables.insert(m, hfk_meridian(c, n, m)?);
    }
    let oracle = &tables[&HfkMethod::Oracle];
    let mut mismatches = Vec::new();
    for m in [HfkMethod::Grading, HfkMethod::Planar] {
        for (k, got, want) in table_diff(&tables[&m], oracle) {
            mismatches.push(format!("{}: k={k} rank {got}, oracle {want}", m.name()));
        }
    }
    Ok((tables, mismatches))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chord_gradings() {
        assert_eq!(Chord::R1.grading(), GradingElement::from_halves(-1, 1, -1));
        assert_eq!(Chord::R12.grading(), GradingElement::from_halves(-1, 2, 0));
        assert_eq!(Chord::I1.grading(), GradingElement::identity());
    }

    #[test]
    fn spin_steps_of_each_chord() {
        let cases = [
            (Chord::R1, (-1, 1)),
            (Chord::R2, (-1, -1)),
            (Chord::R3, (1, -1)),
            (Chord::R12, (-2, 0)),
            (Chord::R23, (0, -2)),
            (Chord::R123, (-1, -1)),
        ];
        for (c, spin) in cases {
            assert_eq!(step(GradingElement::identity(), c).spin(), spin, "{c}");
        }
    }

    #[test]
    fn spinc_canonical() {
        let a = SpincClass::new(8, 1, 1);
        let b = SpincClass::new(8, 1 - 16, 1 - 2);
        assert_eq!(a, b);
        assert_ne!(SpincClass::new(8, 1, 1), SpincClass::new(8, 3, 1));
    }

    #[test]
    fn ranges() {
        assert_eq!(k_range(8), -4..=3);
        assert_eq!(k_range(13), -6..=6);
        assert_eq!(wrap_k(4, 8), -4);
        assert_eq!(wrap_k(-7, 13), 6);
    }

    #[test]
    fn display() {
        assert_eq!(Chord::R12.grading().to_string(), "(-1/2; 1, 0)");
    }
}
