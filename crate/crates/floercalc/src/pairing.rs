//! Box tensor products with the two single-generator filling modules and the
//! homology of the resulting complexes.

use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::{Chord, Idem};
use crate::error::{Error, Result};
use crate::f2::{self, BitRow};
use crate::modules::{DDModule, DModule};

/// Which side of a type-DD module a filling pairs with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// The ρ side.
    Left,
    /// The σ side.
    Right,
}

/// A single-generator A∞-module whose only nontrivial operations are
/// `m(g, head, middle, …, middle, tail) = g`, together with the unital `m₂(g, ι) = g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FillingModule {
    pub name: &'static str,
    pub generator: &'static str,
    pub side: Side,
    /// Idempotent of module generators the filling generator pairs with.
    pub idem: Idem,
    pub head: Chord,
    pub middle: Option<Chord>,
    pub tail: Chord,
    /// Multiplicity of the knot basepoint in the domains realizing the relation.
    pub n_w: u32,
}

impl FillingModule {
    /// The 0-filling: `t` with `m(t, ρ₂, ρ₁₂, …, ρ₁₂, ρ₁) = t`.
    pub fn h0() -> Self {
        FillingModule {
            name: "H0",
            generator: "t",
            side: Side::Left,
            idem: Idem::I2,
            head: Chord::R2,
            middle: Some(Chord::R12),
            tail: Chord::R1,
            n_w: 0,
        }
    }

    /// The ∞-filling: `u` with `m(u, σ₃, σ₂₃, …, σ₂₃, σ₂) = u`. Its domains cover
    /// the knot basepoint once.
    pub fn hinf() -> Self {
        FillingModule {
            name: "HINF",
            generator: "u",
            side: Side::Right,
            idem: Idem::I1,
            head: Chord::R3,
            middle: Some(Chord::R23),
            tail: Chord::R2,
            n_w: 1,
        }
    }

    /// True when head, any number of middles, and tail multiply to a nonzero chord
    /// path with consistent idempotents.
    pub fn composes(&self) -> bool {
        let fits = |a: Chord, b: Chord| a.right_idem() == b.left_idem();
        let mid_ok = self.middle.is_none_or(|m| fits(self.head, m) && fits(m, m) && fits(m, self.tail));
        fits(self.head, self.tail) && mid_ok && self.head.left_idem() == self.idem && self.tail.right_idem() == self.idem
    }
}

/// Out-edges expanded term by term: `(target, pairing-side chord, carried chord)`.
type Adjacency = Vec<Vec<(usize, Chord, Chord)>>;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Stage {
    Start,
    Inside,
}

/// All ends of automaton-accepted paths from `start`, with the product of carried chords.
fn accepted_paths(
    adj: &Adjacency,
    start: usize,
    start_carry: Chord,
    filling: &FillingModule,
    names: &dyn Fn(usize) -> String,
) -> Result<Vec<(usize, Chord)>> {
    struct Frame {
        vertex: usize,
        stage: Stage,
        carried: Vec<Chord>,
    }
    let mut found = Vec::new();
    let mut trail: Vec<(usize, Stage)> = Vec::new();
    fn product(chords: &[Chord], from: Chord) -> Option<Chord> {
        chords.iter().try_fold(from, |acc, &c| acc.mul(c))
    }
    fn walk(
        f: &Frame,
        adj: &Adjacency,
        filling: &FillingModule,
        start_carry: Chord,
        trail: &mut Vec<(usize, Stage)>,
        found: &mut Vec<(usize, Chord)>,
        names: &dyn Fn(usize) -> String,
    ) -> Result<()> {
        if let Some(pos) = trail.iter().position(|&s| s == (f.vertex, f.stage)) {
            // a repeated state: the loop can be pumped unless its carried chords vanish
            let loop_chords = &f.carried[pos..];
            if let Some(first) = loop_chords.first() {
                let idem = if first.is_idempotent() { *first } else { first.left_idem().chord() };
                if product(loop_chords, idem).is_some_and(Chord::is_idempotent) {
                    return Err(Error::NotLeftBounded(format!(
                        "an accepted loop through `{}` can repeat indefinitely",
                        names(f.vertex)
                    )));
                }
            }
        }
        trail.push((f.vertex, f.stage));
        for &(next, chord, carry) in &adj[f.vertex] {
            if chord.is_idempotent() {
                continue;
            }
            let mut carried = f.carried.clone();
            carried.push(carry);
            let Some(prod) = product(&carried, start_carry) else { continue };
            let (advance, accept) = match f.stage {
                Stage::Start => (chord == filling.head, false),
                Stage::Inside => (Some(chord) == filling.middle, chord == filling.tail),
            };
            if accept {
                found.push((next, prod));
            }
            if advance {
                let frame = Frame { vertex: next, stage: Stage::Inside, carried };
                walk(&frame, adj, filling, start_carry, trail, found, names)?;
            }
        }
        trail.pop();
        Ok(())
    }
    let frame = Frame { vertex: start, stage: Stage::Start, carried: Vec::new() };
    walk(&frame, adj, filling, start_carry, &mut trail, &mut found, names)?;
    Ok(found)
}

fn check_acyclic(out: &[Vec<usize>], names: &dyn Fn(usize) -> String) -> Result<()> {
    // Kahn's algorithm
    let n = out.len();
    let mut indeg = vec![0usize; n];
    for targets in out {
        for &t in targets {
            indeg[t] += 1;
        }
    }
    let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = stack.pop() {
        seen += 1;
        for &t in &out[v] {
            indeg[t] -= 1;
            if indeg[t] == 0 {
                stack.push(t);
            }
        }
    }
    if seen < n {
        let witness = (0..n).find(|&v| indeg[v] > 0).expect("a vertex on a cycle");
        return Err(Error::NotLeftBounded(format!(
            "edges with idempotent pairing-side label form a cycle through `{}`",
            names(witness)
        )));
    }
    Ok(())
}

/// Pairs a filling on the ρ side of a type-DD module, leaving a type-D
/// structure over the σ side. Generator names and roles are kept.
pub fn box_tensor_left(filling: &FillingModule, m: &DDModule) -> Result<DModule> {
    if filling.side != Side::Left {
        return Err(Error::NotLeftBounded(format!("{} pairs with the σ side", filling.name)));
    }
    let names = |i: usize| m.generators[i].name.clone();
    let n = m.generators.len();
    let mut adj: Adjacency = vec![Vec::new(); n];
    let mut pure: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (&(x, y), label) in &m.edges {
        for (l, r) in label.terms() {
            adj[x].push((y, l, r));
            if l.is_idempotent() && !pure[x].contains(&y) {
                pure[x].push(y);
            }
        }
    }
    check_acyclic(&pure, &names)?;

    let mut out = DModule::new();
    let mut index = vec![usize::MAX; n];
    for (i, g) in m.generators.iter().enumerate() {
        if g.left == filling.idem {
            index[i] = out.add_generator(g.name.clone(), g.right, g.role);
        }
    }
    for (&(x, y), label) in &m.edges {
        for (l, r) in label.terms() {
            if l.is_idempotent() && index[x] != usize::MAX && index[y] != usize::MAX {
                out.add_chord(index[x], index[y], r);
            }
        }
    }
    for x in 0..n {
        if index[x] == usize::MAX {
            continue;
        }
        let carry = m.generators[x].right.chord();
        for (end, prod) in accepted_paths(&adj, x, carry, filling, &names)? {
            if index[end] != usize::MAX {
                out.add_chord(index[x], index[end], prod);
            }
        }
    }
    Ok(out)
}

/// An F₂ complex produced by pairing a filling with a type-D structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorComplex {
    pub names: Vec<String>,
    /// Index of the type-D generator each complex generator came from.
    pub origin: Vec<usize>,
    /// `(source, target, n_w)` with odd multiplicity.
    pub edges: BTreeSet<(usize, usize, u32)>,
}

impl TensorComplex {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    fn toggle(&mut self, e: (usize, usize, u32)) {
        if !self.edges.remove(&e) {
            self.edges.insert(e);
        }
    }

    /// The differential as a set of `(source, target)` pairs, summing over basepoint weights.
    pub fn differential(&self) -> BTreeSet<(usize, usize)> {
        let mut out = BTreeSet::new();
        for &(s, t, _) in &self.edges {
            if !out.remove(&(s, t)) {
                out.insert((s, t));
            }
        }
        out
    }

    /// The part of the differential avoiding the knot basepoint.
    pub fn knot_differential(&self) -> BTreeSet<(usize, usize)> {
        self.edges.iter().filter(|e| e.2 == 0).map(|&(s, t, _)| (s, t)).collect()
    }

    /// Homology rank of the whole complex or of a subcomplex.
    pub fn homology_rank(&self, restriction: Option<&BTreeSet<usize>>) -> Result<usize> {
        rank_of(&self.names, &self.differential(), restriction)
    }

    /// Homology rank of the knot differential, optionally restricted.
    pub fn knot_homology_rank(&self, restriction: Option<&BTreeSet<usize>>) -> Result<usize> {
        rank_of(&self.names, &self.knot_differential(), restriction)
    }
}

fn rank_of(names: &[String], d: &BTreeSet<(usize, usize)>, restriction: Option<&BTreeSet<usize>>) -> Result<usize> {
    let keep: Vec<usize> = match restriction {
        Some(r) => r.iter().copied().collect(),
        None => (0..names.len()).collect(),
    };
    let pos: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(i, &g)| (g, i)).collect();
    let mut rows = vec![BitRow::zeros(keep.len()); keep.len()];
    for &(s, t) in d {
        match (pos.get(&s), pos.get(&t)) {
            (Some(&i), Some(&j)) => rows[i].flip(j),
            (Some(_), None) => {
                return Err(Error::NotSubcomplex(format!(
                    "`{}` has a differential to `{}` outside the restriction",
                    names[s], names[t]
                )))
            }
            _ => {}
        }
    }
    Ok(f2::homology_rank(&rows))
}

/// Pairs a filling with a type-D structure over the σ side, giving an F₂ complex
/// on the generators of matching idempotent.
pub fn box_tensor_final(filling: &FillingModule, d: &DModule) -> Result<TensorComplex> {
    if filling.side != Side::Right {
        return Err(Error::NotLeftBounded(format!("{} pairs with the ρ side", filling.name)));
    }
    let names = |i: usize| d.generators[i].name.clone();
    let n = d.generators.len();
    let mut adj: Adjacency = vec![Vec::new(); n];
    for (&(x, y), label) in &d.edges {
        for c in label.terms() {
            adj[x].push((y, c, Chord::I1));
        }
    }
    let mut tc = TensorComplex { names: Vec::new(), origin: Vec::new(), edges: BTreeSet::new() };
    let mut index = vec![usize::MAX; n];
    for (i, g) in d.generators.iter().enumerate() {
        if g.idem == filling.idem {
            index[i] = tc.names.len();
            tc.names.push(g.name.clone());
            tc.origin.push(i);
        }
    }
    for x in 0..n {
        if index[x] == usize::MAX {
            continue;
        }
        for (end, _) in accepted_paths(&adj, x, Chord::I1, filling, &names)? {
            if index[end] != usize::MAX {
                tc.toggle((index[x], index[end], filling.n_w));
            }
        }
    }
    Ok(tc)
}

/// Brute-force homology rank `dim ker ∂ − dim im ∂` by enumerating all vectors; for tests.
pub fn brute_force_rank(n: usize, d: &BTreeSet<(usize, usize)>) -> usize {
    assert!(n <= 16, "brute force is exponential");
    let image_of = |v: u32| -> u32 {
        let mut out = 0u32;
        for &(s, t) in d {
            if v >> s & 1 == 1 {
                out ^= 1 << t;
            }
        }
        out
    };
    let mut kernel = 0usize;
    let mut image: BTreeSet<u32> = BTreeSet::new();
    for v in 0..(1u32 << n) {
        let w = image_of(v);
        if w == 0 {
            kernel += 1;
        }
        image.insert(w);
    }
    // both are subspaces: sizes are powers of two
    (kernel.trailing_zeros() - image.len().trailing_zeros()) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fillings_compose() {
        assert!(FillingModule::h0().composes());
        assert!(FillingModule::hinf().composes());
    }

    #[test]
    fn empty_final() {
        let tc = box_tensor_final(&FillingModule::hinf(), &DModule::new()).unwrap();
        assert!(tc.is_empty());
        assert_eq!(tc.homology_rank(None).unwrap(), 0);
    }

    #[test]
    fn single_path() {
        let mut d = DModule::new();
        let a = d.add_generator("a", Idem::I1, None);
        let b = d.add_generator("b", Idem::I2, None);
        let c = d.add_generator("c", Idem::I1, None);
        d.add_chord(a, b, Chord::R3);
        d.add_chord(b, c, Chord::R2);
        let tc = box_tensor_final(&FillingModule::hinf(), &d).unwrap();
        assert_eq!(tc.len(), 2);
        assert_eq!(tc.homology_rank(None).unwrap(), 0);
        assert_eq!(tc.knot_homology_rank(None).unwrap(), 2);
        let only_a: BTreeSet<usize> = [0].into();
        assert!(matches!(tc.homology_rank(Some(&only_a)), Err(Error::NotSubcomplex(_))));
    }

    #[test]
    fn brute_force_matches() {
        let d: BTreeSet<(usize, usize)> = [(0, 1)].into();
        assert_eq!(brute_force_rank(3, &d), 1);
    }
}
