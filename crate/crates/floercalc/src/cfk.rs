//! Reduced knot Floer complexes over F₂[U].
//!
//! A complex is stored as a list of generators with Alexander (and optionally
//! Maslov) gradings and a list of arrows `x → y` meaning `∂x ∋ U^u·y`. For
//! basis manipulations the differential is expanded into a matrix of
//! polynomials in `U`, each packed into a `u64` bitmask.

use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashSet};
use std::cmp::Reverse;

use crate::error::{Error, Result, SchemaError};
use crate::f2::{self, BitRow};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CfkGenerator {
    pub name: String,
    pub alexander: i32,
    pub maslov: Option<i32>,
}

/// `∂source ∋ U^u · target`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UArrow {
    pub source: usize,
    pub target: usize,
    pub u: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CfkComplex {
    pub name: String,
    pub generators: Vec<CfkGenerator>,
    pub arrows: Vec<UArrow>,
}

/// Largest U-power an arrow may carry; the basis search packs polynomials into `u64`.
pub const MAX_U_POWER: u32 = 31;

impl CfkComplex {
    /// Builds a complex, rejecting out-of-range indices, duplicate names and
    /// U-powers above [`MAX_U_POWER`].
    pub fn new(
        name: impl Into<String>,
        generators: Vec<CfkGenerator>,
        arrows: Vec<UArrow>,
    ) -> std::result::Result<Self, SchemaError> {
        let mut seen = BTreeSet::new();
        for g in &generators {
            if !seen.insert(g.name.as_str()) {
                return Err(SchemaError::new(format!("duplicate generator name `{}`", g.name)));
            }
        }
        for a in &arrows {
            if a.source >= generators.len() || a.target >= generators.len() {
                return Err(SchemaError::new(format!(
                    "arrow {}→{} refers to a missing generator",
                    a.source, a.target
                )));
            }
            if a.u > MAX_U_POWER {
                return Err(SchemaError::new(format!("U-power {} exceeds {MAX_U_POWER}", a.u)));
            }
        }
        Ok(CfkComplex { name: name.into(), generators, arrows })
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    fn alex(&self, i: usize) -> i64 {
        self.generators[i].alexander as i64
    }

    fn is_vertical(&self, a: &UArrow) -> bool {
        a.u == 0
    }

    fn is_horizontal(&self, a: &UArrow) -> bool {
        self.alex(a.source) - self.alex(a.target) + a.u as i64 == 0
    }

    /// The differential as a matrix of U-polynomials, `m[x][y]` bit `k` set iff `∂x ∋ U^k y`.
    pub fn poly_matrix(&self) -> Vec<Vec<u64>> {
        let n = self.generators.len();
        let mut m = vec![vec![0u64; n]; n];
        for a in &self.arrows {
            m[a.source][a.target] ^= 1u64 << a.u;
        }
        m
    }

    /// Rebuilds the arrow list from a polynomial matrix, in (source, target, power) order.
    pub fn with_matrix(&self, m: &[Vec<u64>]) -> CfkComplex {
        let mut arrows = Vec::new();
        for (s, row) in m.iter().enumerate() {
            for (t, &p) in row.iter().enumerate() {
                let mut bits = p;
                while bits != 0 {
                    let k = bits.trailing_zeros();
                    arrows.push(UArrow { source: s, target: t, u: k });
                    bits &= bits - 1;
                }
            }
        }
        CfkComplex { name: self.name.clone(), generators: self.generators.clone(), arrows }
    }
}

/// A finite complex over F₂ with named generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct F2Complex {
    pub names: Vec<String>,
    pub edges: BTreeSet<(usize, usize)>,
}

impl F2Complex {
    fn rows(&self, keep: &[usize]) -> Vec<BitRow> {
        let pos: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let mut rows = vec![BitRow::zeros(keep.len()); keep.len()];
        for &(s, t) in &self.edges {
            if let (Some(&i), Some(&j)) = (pos.get(&s), pos.get(&t)) {
                rows[i].flip(j);
            }
        }
        rows
    }

    pub fn homology_rank(&self) -> usize {
        let all: Vec<usize> = (0..self.names.len()).collect();
        f2::homology_rank(&self.rows(&all))
    }

    /// Homology of the quotient by the complement of `keep` (edges leaving `keep` are dropped).
    pub fn quotient_rank(&self, keep: &[usize]) -> usize {
        f2::homology_rank(&self.rows(keep))
    }

    pub fn differential_rank(&self) -> usize {
        let all: Vec<usize> = (0..self.names.len()).collect();
        f2::rank(&self.rows(&all))
    }
}

pub fn vertical_complex(c: &CfkComplex) -> F2Complex {
    flat(c, |a| c.is_vertical(a))
}

pub fn horizontal_complex(c: &CfkComplex) -> F2Complex {
    flat(c, |a| c.is_horizontal(a))
}

fn flat(c: &CfkComplex, keep: impl Fn(&UArrow) -> bool) -> F2Complex {
    let mut edges = BTreeSet::new();
    for a in c.arrows.iter().filter(|a| keep(a)) {
        let e = (a.source, a.target);
        if !edges.remove(&e) {
            edges.insert(e);
        }
    }
    F2Complex { names: c.generators.iter().map(|g| g.name.clone()).collect(), edges }
}

/// One failed invariant with a human-readable witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub invariant: &'static str,
    pub witness: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, invariant: &'static str, witness: String) {
        self.violations.push(Violation { invariant, witness });
    }
}

fn clmul(a: u64, b: u64) -> u128 {
    let mut out = 0u128;
    let mut bits = a;
    while bits != 0 {
        let k = bits.trailing_zeros();
        out ^= (b as u128) << k;
        bits &= bits - 1;
    }
    out
}

fn d_squared(m: &[Vec<u64>]) -> Vec<(usize, usize, u128)> {
    let n = m.len();
    let mut bad = Vec::new();
    for x in 0..n {
        for z in 0..n {
            let mut acc = 0u128;
            for (&a, row) in m[x].iter().zip(m) {
                if a != 0 && row[z] != 0 {
                    acc ^= clmul(a, row[z]);
                }
            }
            if acc != 0 {
                bad.push((x, z, acc));
            }
        }
    }
    bad
}

/// Checks every complex invariant and lists the failures.
pub fn validate(c: &CfkComplex) -> ValidationReport {
    let mut report = ValidationReport::default();
    let name = |i: usize| c.generators[i].name.as_str();
    let mut seen = BTreeSet::new();
    for g in &c.generators {
        if !seen.insert(g.name.as_str()) {
            report.push("unique-names", format!("`{}` appears twice", g.name));
        }
    }
    for a in &c.arrows {
        let drop = c.alex(a.source) - c.alex(a.target) + a.u as i64;
        if drop < 0 {
            report.push(
                "plane-direction",
                format!("{}→{} (u={}) raises the j-filtration by {}", name(a.source), name(a.target), a.u, -drop),
            );
        } else if drop == 0 && a.u == 0 {
            report.push(
                "reducedness",
                format!("{}→{} (u=0) drops neither filtration", name(a.source), name(a.target)),
            );
        }
        if let (Some(ms), Some(mt)) = (c.generators[a.source].maslov, c.generators[a.target].maslov) {
            if ms as i64 - 1 != mt as i64 - 2 * a.u as i64 {
                report.push(
                    "maslov-grading",
                    format!("{}→{} (u={}) has Maslov {} → {}", name(a.source), name(a.target), a.u, ms, mt),
                );
            }
        }
    }
    for (x, z, p) in d_squared(&c.poly_matrix()) {
        report.push(
            "d-squared",
            format!("∂²{} has U-polynomial bitmask {:#b} on {}", name(x), p, name(z)),
        );
    }
    if let (Some(lo), Some(hi)) = (
        c.generators.iter().map(|g| g.alexander).min(),
        c.generators.iter().map(|g| g.alexander).max(),
    ) {
        if lo != -hi {
            report.push("alexander-symmetry", format!("Alexander range is [{lo}, {hi}]"));
        }
    }
    let v = vertical_complex(c).homology_rank();
    if v != 1 {
        report.push("vertical-homology", format!("vertical homology has rank {v}"));
    }
    let h = horizontal_complex(c).homology_rank();
    if h != 1 {
        report.push("horizontal-homology", format!("horizontal homology has rank {h}"));
    }
    report
}

/// An elementary filtered substitution `target ↦ target + U^u_power · added`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Substitution {
    pub target: usize,
    pub added: usize,
    pub u_power: u32,
}

impl Substitution {
    /// Whether `U^a·y` lies in the same bifiltration level as `x`.
    pub fn is_filtered(&self, c: &CfkComplex) -> bool {
        self.target != self.added && c.alex(self.added) - self.u_power as i64 <= c.alex(self.target)
    }

    fn is_homogeneous(&self, c: &CfkComplex) -> bool {
        match (c.generators[self.target].maslov, c.generators[self.added].maslov) {
            (Some(mx), Some(my)) => my as i64 - 2 * self.u_power as i64 == mx as i64,
            _ => true,
        }
    }
}

fn apply_to_matrix(m: &mut [Vec<u64>], s: Substitution) {
    let (x, y, a) = (s.target, s.added, s.u_power);
    let row_y = m[y].clone();
    for (e, r) in m[x].iter_mut().zip(&row_y) {
        *e ^= r << a;
    }
    for row in m.iter_mut() {
        row[y] ^= row[x] << a;
    }
}

/// Applies one substitution, rejecting it unless it respects both filtrations.
pub fn substitute(c: &CfkComplex, s: Substitution) -> Result<CfkComplex> {
    if !s.is_filtered(c) {
        return Err(Error::IllegalSubstitution(format!(
            "{} ↦ {} + U^{}·{} leaves the filtration level",
            c.generators[s.target].name, c.generators[s.target].name, s.u_power, c.generators[s.added].name
        )));
    }
    let mut m = c.poly_matrix();
    apply_to_matrix(&mut m, s);
    if m.iter().flatten().any(|&p| p >> (MAX_U_POWER + 1) != 0) {
        return Err(Error::IllegalSubstitution(format!("U-power overflow beyond {MAX_U_POWER}")));
    }
    let mut out = c.with_matrix(&m);
    if !s.is_homogeneous(c) {
        for g in &mut out.generators {
            g.maslov = None;
        }
    }
    Ok(out)
}

type Score = (usize, usize, usize);

/// Quality of a basis: degree excess in the vertical and horizontal complexes,
/// then diagonal arrows, then arrows overall. Zero excess means simplified.
fn score(c: &CfkComplex) -> Score {
    let n = c.generators.len();
    let mut vdeg = vec![0usize; n];
    let mut hdeg = vec![0usize; n];
    let mut diag = 0;
    for a in &c.arrows {
        if c.is_vertical(a) {
            vdeg[a.source] += 1;
            vdeg[a.target] += 1;
        } else if c.is_horizontal(a) {
            hdeg[a.source] += 1;
            hdeg[a.target] += 1;
        } else {
            diag += 1;
        }
    }
    let excess: usize = vdeg.iter().chain(&hdeg).map(|&d| d.saturating_sub(1)).sum();
    (excess, diag, c.arrows.len())
}

fn candidate_moves(c: &CfkComplex) -> Vec<Substitution> {
    let n = c.generators.len();
    let mut out = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if x == y {
                continue;
            }
            let a = (c.alex(y) - c.alex(x)).max(0) as u32;
            out.push(Substitution { target: x, added: y, u_power: a });
        }
    }
    out
}

/// Default node budget of [`simplify_basis`].
pub const DEFAULT_BUDGET: usize = 20_000;

/// Searches for a basis that is vertically and horizontally simplified at once.
///
/// Already simplified inputs are returned unchanged with an empty log.
pub fn simplify_basis(c: &CfkComplex) -> Result<(CfkComplex, Vec<Substitution>)> {
    simplify_basis_with_budget(c, DEFAULT_BUDGET)
}

pub fn simplify_basis_with_budget(
    c: &CfkComplex,
    budget: usize,
) -> Result<(CfkComplex, Vec<Substitution>)> {
    if score(c).0 == 0 {
        return Ok((c.clone(), Vec::new()));
    }
    // best-first over (score, depth); ties broken by insertion order
    let mut heap: BinaryHeap<Reverse<(Score, usize, usize)>> = BinaryHeap::new();
    let mut nodes: Vec<(CfkComplex, Vec<Substitution>)> = vec![(c.clone(), Vec::new())];
    let mut seen: HashSet<Vec<UArrow>> = HashSet::from([c.arrows.clone()]);
    heap.push(Reverse((score(c), 0, 0)));
    let mut best = 0usize;
    while let Some(Reverse((sc, depth, id))) = heap.pop() {
        if sc.0 == 0 {
            let (found, log) = nodes[id].clone();
            return Ok(polish(found, log));
        }
        if score(&nodes[best].0) > sc {
            best = id;
        }
        if nodes.len() >= budget {
            break;
        }
        let (cur, log) = nodes[id].clone();
        for mv in candidate_moves(&cur) {
            let Ok(next) = substitute(&cur, mv) else { continue };
            if !seen.insert(next.arrows.clone()) {
                continue;
            }
            let s = score(&next);
            let mut next_log = log.clone();
            next_log.push(mv);
            nodes.push((next, next_log));
            heap.push(Reverse((s, depth + 1, nodes.len() - 1)));
        }
    }
    Err(Error::SimplificationFailed(Box::new(nodes[best].0.clone())))
}

/// Greedily removes diagonal arrows while keeping the basis simplified.
fn polish(mut c: CfkComplex, mut log: Vec<Substitution>) -> (CfkComplex, Vec<Substitution>) {
    loop {
        let current = score(&c);
        let improved = candidate_moves(&c).into_iter().find_map(|mv| {
            let next = substitute(&c, mv).ok()?;
            let s = score(&next);
            (s.0 == 0 && (s.1, s.2) < (current.1, current.2)).then_some((next, mv))
        });
        match improved {
            Some((next, mv)) => {
                c = next;
                log.push(mv);
            }
            None => return (c, log),
        }
    }
}

/// A paired arrow of a simplified basis together with its length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arrow {
    pub source: usize,
    pub target: usize,
    pub length: u32,
}

/// Arrow data of a simultaneously simplified basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowData {
    pub vertical: Vec<Arrow>,
    pub horizontal: Vec<Arrow>,
    /// The generator with no vertical arrow.
    pub x0: usize,
    /// The generator with no horizontal arrow.
    pub y0: usize,
}

fn paired(
    c: &CfkComplex,
    keep: impl Fn(&UArrow) -> bool,
    length: impl Fn(&UArrow) -> u32,
    kind: &str,
) -> Result<(Vec<Arrow>, usize)> {
    let n = c.generators.len();
    let mut deg = vec![0usize; n];
    let mut arrows = Vec::new();
    for a in c.arrows.iter().filter(|a| keep(a)) {
        deg[a.source] += 1;
        deg[a.target] += 1;
        arrows.push(Arrow { source: a.source, target: a.target, length: length(a) });
    }
    if let Some(bad) = (0..n).find(|&i| deg[i] > 1) {
        return Err(Error::NotSimplified(format!(
            "`{}` meets {} {kind} arrows",
            c.generators[bad].name, deg[bad]
        )));
    }
    let free: Vec<usize> = (0..n).filter(|&i| deg[i] == 0).collect();
    match free.as_slice() {
        [one] => {
            arrows.sort();
            Ok((arrows, *one))
        }
        _ => Err(Error::NotSimplified(format!(
            "{} generators carry no {kind} arrow (need exactly one)",
            free.len()
        ))),
    }
}

/// Reads off vertical and horizontal arrows and the two distinguished generators.
pub fn arrows_of(c: &CfkComplex) -> Result<ArrowData> {
    let (vertical, x0) = paired(
        c,
        |a| c.is_vertical(a),
        |a| (c.alex(a.source) - c.alex(a.target)) as u32,
        "vertical",
    )?;
    let (horizontal, y0) = paired(c, |a| c.is_horizontal(a), |a| a.u, "horizontal")?;
    Ok(ArrowData { vertical, horizontal, x0, y0 })
}

/// Arrow data assembled from two different bases of the same complex: vertical
/// arrows from `vertical_basis`, horizontal arrows from `horizontal_basis`.
///
/// Both bases must list the same generator names with the same Alexander
/// gradings, so that the two distinguished generators can be matched by name.
pub fn arrows_of_two_bases(
    vertical_basis: &CfkComplex,
    horizontal_basis: &CfkComplex,
) -> Result<ArrowData> {
    let same = vertical_basis.generators.len() == horizontal_basis.generators.len()
        && vertical_basis
            .generators
            .iter()
            .zip(&horizontal_basis.generators)
            .all(|(a, b)| a.name == b.name && a.alexander == b.alexander);
    if !same {
        return Err(Error::NotSimplified(
            "the two bases must list the same generators with the same Alexander gradings".into(),
        ));
    }
    let v = vertical_basis;
    let h = horizontal_basis;
    let (vertical, x0) = paired(v, |a| v.is_vertical(a), |a| (v.alex(a.source) - v.alex(a.target)) as u32, "vertical")?;
    let (horizontal, y0) = paired(h, |a| h.is_horizontal(a), |a| a.u, "horizontal")?;
    Ok(ArrowData { vertical, horizontal, x0, y0 })
}

/// τ as the Alexander grading of the vertically distinguished generator.
pub fn tau(c: &CfkComplex) -> Result<i64> {
    let a = arrows_of(c)?;
    Ok(c.alex(a.x0))
}

/// τ from its definition: the least `s` for which the inclusion of the
/// vertical subcomplex `{A ≤ s}` is nontrivial on homology.
pub fn tau_by_definition(c: &CfkComplex) -> i64 {
    let v = vertical_complex(c);
    let n = c.generators.len();
    let all: Vec<usize> = (0..n).collect();
    let lo = c.generators.iter().map(|g| g.alexander as i64).min().unwrap_or(0);
    let hi = c.generators.iter().map(|g| g.alexander as i64).max().unwrap_or(0);
    for s in lo..=hi {
        // the inclusion is nonzero iff the quotient by the subcomplex loses rank
        let quotient: Vec<usize> = all.iter().copied().filter(|&i| c.alex(i) > s).collect();
        let sub: Vec<usize> = all.iter().copied().filter(|&i| c.alex(i) <= s).collect();
        let total = v.homology_rank();
        let hq = v.quotient_rank(&quotient);
        let hs = v.quotient_rank(&sub);
        // long exact sequence: rank(i_*) = (hs + total - hq) / 2
        if hs + total > hq {
            return s;
        }
    }
    hi
}

/// Rank of the homology of the vertical complex modulo generators with `A ≤ k`.
pub fn quotient_homology_rank(c: &CfkComplex, k: i64) -> usize {
    let keep: Vec<usize> = (0..c.generators.len()).filter(|&i| c.alex(i) > k).collect();
    vertical_complex(c).quotient_rank(&keep)
}

/// The dual complex: arrows reversed, Alexander and Maslov gradings negated.
pub fn mirror(c: &CfkComplex) -> CfkComplex {
    CfkComplex {
        name: format!("{}_mirror", c.name),
        generators: c
            .generators
            .iter()
            .map(|g| CfkGenerator { name: g.name.clone(), alexander: -g.alexander, maslov: g.maslov.map(|m| -m) })
            .collect(),
        arrows: c
            .arrows
            .iter()
            .map(|a| UArrow { source: a.target, target: a.source, u: a.u })
            .collect(),
    }
}

/// Per-Alexander generator counts of the vertical homology's associated graded,
/// which for a reduced complex is the generator count per Alexander grading.
pub fn hfk_ranks(c: &CfkComplex) -> BTreeMap<i32, usize> {
    let mut out = BTreeMap::new();
    for g in &c.generators {
        *out.entry(g.alexander).or_insert(0) += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen(name: &str, a: i32) -> CfkGenerator {
        CfkGenerator { name: name.into(), alexander: a, maslov: None }
    }

    fn trefoil() -> CfkComplex {
        CfkComplex::new(
            "t",
            vec![gen("x", 1), gen("y", 0), gen("z", -1)],
            vec![UArrow { source: 1, target: 0, u: 1 }, UArrow { source: 1, target: 2, u: 0 }],
        )
        .unwrap()
    }

    #[test]
    fn trefoil_is_valid_and_simplified() {
        let c = trefoil();
        assert!(validate(&c).is_valid(), "{:?}", validate(&c));
        let a = arrows_of(&c).unwrap();
        assert_eq!(a.x0, 0);
        assert_eq!(a.y0, 2);
        assert_eq!(tau(&c).unwrap(), 1);
        assert_eq!(tau_by_definition(&c), 1);
    }

    #[test]
    fn reducedness_witness() {
        let c = CfkComplex::new("bad", vec![gen("a", 0), gen("b", 0)], vec![UArrow { source: 0, target: 1, u: 0 }])
            .unwrap();
        let r = validate(&c);
        assert!(r.violations.iter().any(|v| v.invariant == "reducedness"));
    }

    #[test]
    fn substitution_round_trip() {
        let c = trefoil();
        let s = Substitution { target: 0, added: 2, u_power: 0 };
        let d = substitute(&c, s).unwrap();
        assert!(validate(&d).is_valid());
        // applying the same move twice is the identity over F₂
        let e = substitute(&d, s).unwrap();
        assert_eq!(e.poly_matrix(), c.poly_matrix());
    }

    #[test]
    fn illegal_substitution() {
        let c = trefoil();
        let s = Substitution { target: 2, added: 0, u_power: 0 };
        assert!(matches!(substitute(&c, s), Err(Error::IllegalSubstitution(_))));
    }

    #[test]
    fn mirror_tau() {
        let c = trefoil();
        assert_eq!(tau(&mirror(&c)).unwrap(), -1);
    }
}
