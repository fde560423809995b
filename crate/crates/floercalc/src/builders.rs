//! Module graphs built directly from a simplified knot Floer complex.
//!
//! Generator names follow the construction: `x_0` and `x_inf` for each knot
//! generator `x`, `x_i` for the interior of the vertical chain leaving `x`
//! (`i > 0`) or of the horizontal chain leaving `x` (`i < 0`), and `gamma_μ`
//! for the unstable chain. The unstable chain leaves the `_0` generator of the
//! horizontally distinguished element and arrives at the `_inf` generator of
//! the vertically distinguished element.

use crate::algebra::{BiLabel, Chord, Idem};
use std::collections::BTreeSet;

use crate::cfk::{self, Arrow, ArrowData, CfkComplex};
use crate::error::{Error, Result};
use crate::modules::{self, DDModule, DModule, Role};

use Chord::{I1, I2, R1, R12, R123, R2, R23, R3};

/// Which module a build produces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Flavor {
    DdUnreduced,
    DdReduced,
    CfdKnot,
    CfdMeridianExpected,
}

impl Flavor {
    pub const ALL: [Flavor; 4] = [Flavor::DdUnreduced, Flavor::DdReduced, Flavor::CfdKnot, Flavor::CfdMeridianExpected];

    pub fn name(self) -> &'static str {
        match self {
            Flavor::DdUnreduced => "dd_unreduced",
            Flavor::DdReduced => "dd_reduced",
            Flavor::CfdKnot => "cfd_knot",
            Flavor::CfdMeridianExpected => "cfd_meridian_expected",
        }
    }
}

impl std::str::FromStr for Flavor {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Flavor::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown flavor `{s}`"))
    }
}

/// Output of [`build`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Built {
    DD(DDModule),
    D(DModule),
}

/// Dispatches on the flavor; `framing` is the signed framing `f`.
pub fn build(c: &CfkComplex, framing: i64, flavor: Flavor) -> Result<Built> {
    Ok(match flavor {
        Flavor::DdUnreduced => Built::DD(build_dd_unreduced(c, framing)?),
        Flavor::DdReduced => Built::DD(build_dd_reduced(c, framing)?),
        Flavor::CfdKnot => Built::D(build_cfd_knot(c, framing)?),
        Flavor::CfdMeridianExpected => Built::D(build_cfd_meridian_expected(c, -framing)?),
    })
}

fn gname(c: &CfkComplex, x: usize, suffix: impl std::fmt::Display) -> String {
    format!("{}_{}", c.generators[x].name, suffix)
}

fn both_vertical_terms() -> BiLabel {
    BiLabel::from_iter([(R1, R3), (R123, R123)])
}

/// Per-knot-generator `x_0`, `x_inf` pair with the `ρ₁σ₃ + ρ₁₂₃σ₁₂₃` edge.
struct Skeleton {
    zero: Vec<usize>,
    inf: Vec<usize>,
}

fn skeleton(c: &CfkComplex, m: &mut DDModule) -> Skeleton {
    let mut zero = Vec::new();
    let mut inf = Vec::new();
    for x in 0..c.generators.len() {
        let z = m.add_generator(gname(c, x, 0), Idem::I1, Idem::I1, Some(Role::Zero(x)));
        let i = m.add_generator(gname(c, x, "inf"), Idem::I2, Idem::I2, Some(Role::Inf(x)));
        m.add_edge(z, i, &both_vertical_terms());
        zero.push(z);
        inf.push(i);
    }
    Skeleton { zero, inf }
}

fn interior(c: &CfkComplex, m: &mut DDModule, x: usize, i: i32) -> usize {
    m.add_generator(gname(c, x, i), Idem::I2, Idem::I1, Some(Role::Tail(x, i)))
}

fn gamma(m: &mut DDModule, mu: u32) -> usize {
    m.add_generator(format!("gamma_{mu}"), Idem::I2, Idem::I1, Some(Role::Gamma(mu)))
}

/// The reduced type-DD model of the knot-and-meridian complement at framing `f`.
pub fn build_dd_reduced(c: &CfkComplex, framing: i64) -> Result<DDModule> {
    let arrows = cfk::arrows_of(c)?;
    let tau = c.generators[arrows.x0].alexander as i64;
    let mut m = DDModule::new();
    let sk = skeleton(c, &mut m);

    for a in &arrows.vertical {
        let l = a.length as i32;
        let ids: Vec<usize> = (1..=l).map(|i| interior(c, &mut m, a.source, i)).collect();
        m.add_pair(sk.inf[a.source], ids[0], I2, R2);
        m.add_pair(ids[0], sk.inf[a.source], R23, R1);
        for w in ids.windows(2) {
            m.add_pair(w[0], w[1], I2, R12);
            m.add_pair(w[1], w[0], R23, I1);
        }
        let last = *ids.last().expect("arrow length is positive");
        m.add_pair(last, sk.inf[a.target], I2, R1);
        m.add_pair(sk.inf[a.target], last, R23, R2);
    }

    for a in &arrows.horizontal {
        let l = a.length as i32;
        let ids: Vec<usize> = (1..=l).map(|i| interior(c, &mut m, a.source, -i)).collect();
        m.add_pair(sk.zero[a.source], ids[0], R3, I1);
        m.add_pair(ids[0], sk.zero[a.source], R2, R12);
        for w in ids.windows(2) {
            m.add_pair(w[0], w[1], R23, I1);
            m.add_pair(w[1], w[0], I2, R12);
        }
        let last = *ids.last().expect("arrow length is positive");
        m.add_pair(last, sk.zero[a.target], R2, I1);
        m.add_pair(sk.zero[a.target], last, R3, R12);
    }

    let h0 = sk.zero[arrows.y0];
    let vinf = sk.inf[arrows.x0];
    let two_tau = 2 * tau;
    if framing < two_tau {
        let len = (two_tau - framing) as u32;
        let ids: Vec<usize> = (1..=len).map(|mu| gamma(&mut m, mu)).collect();
        m.add_pair(h0, ids[0], R3, I1);
        m.add_pair(ids[0], h0, R2, R12);
        for w in ids.windows(2) {
            m.add_pair(w[0], w[1], R23, I1);
            m.add_pair(w[1], w[0], I2, R12);
        }
        let last = *ids.last().expect("chain is nonempty");
        m.add_pair(last, vinf, R23, R1);
        m.add_pair(vinf, last, I2, R2);
    } else if framing == two_tau {
        m.add_pair(h0, vinf, R3, R1);
        m.add_pair(vinf, h0, R2, R2);
    } else {
        let len = (framing - two_tau) as u32;
        let ids: Vec<usize> = (1..=len).map(|mu| gamma(&mut m, mu)).collect();
        m.add_pair(h0, ids[0], R3, R12);
        m.add_pair(ids[0], h0, R2, I1);
        for w in ids.windows(2) {
            m.add_pair(w[0], w[1], I2, R12);
            m.add_pair(w[1], w[0], R23, I1);
        }
        let last = *ids.last().expect("chain is nonempty");
        m.add_pair(last, vinf, I2, R1);
        m.add_pair(vinf, last, R23, R2);
    }
    Ok(m)
}

/// Checks the preconditions of [`build_dd_unreduced`] and returns `n`.
fn unreduced_n(c: &CfkComplex, arrows: &ArrowData, framing: i64) -> Result<i64> {
    let n = -framing;
    let tau = c.generators[arrows.x0].alexander as i64;
    let max_alex = c.generators.iter().map(|g| (g.alexander as i64).abs()).max().unwrap_or(0);
    let max_len = arrows.vertical.iter().chain(&arrows.horizontal).map(|a| a.length as i64).max().unwrap_or(0);
    let fail = |why: String| Err(Error::UnsupportedFraming(format!("f = {framing}: {why}")));
    if n <= 0 || n % 2 != 0 {
        return fail("the unreduced model needs f = −n with n positive and even".into());
    }
    if n / 2 <= max_len {
        return fail(format!("n/2 = {} must exceed the longest arrow ({max_len})", n / 2));
    }
    if n / 2 <= max_alex {
        return fail(format!("n/2 = {} must exceed every |A| (max {max_alex})", n / 2));
    }
    if n + 2 * tau < 1 {
        return fail(format!("n + 2τ = {} must be at least 1", n + 2 * tau));
    }
    Ok(n)
}

/// The unreduced type-DD model at framing `f = −n`, flagged unreduced.
///
/// Each knot generator `x` carries `n/2 + A(x)` generators down its vertical
/// tail and `n/2 − A(x)` along its horizontal tail, so that tails of arrow
/// endpoints line up level by level and are joined by unit edges.
pub fn build_dd_unreduced(c: &CfkComplex, framing: i64) -> Result<DDModule> {
    let arrows = cfk::arrows_of(c)?;
    let n = unreduced_n(c, &arrows, framing)?;
    let half = (n / 2) as i32;
    let mut m = DDModule::new();
    m.unreduced = true;
    let sk = skeleton(c, &mut m);
    let count = c.generators.len();
    let pos_len: Vec<i32> = c.generators.iter().map(|g| half + g.alexander).collect();
    let neg_len: Vec<i32> = c.generators.iter().map(|g| half - g.alexander).collect();

    let mut pos: Vec<Vec<usize>> = Vec::with_capacity(count);
    let mut neg: Vec<Vec<usize>> = Vec::with_capacity(count);
    for x in 0..count {
        let p: Vec<usize> = (1..=pos_len[x]).map(|i| interior(c, &mut m, x, i)).collect();
        let q: Vec<usize> = (1..=neg_len[x]).map(|i| interior(c, &mut m, x, -i)).collect();
        m.add_pair(sk.inf[x], p[0], I2, R2);
        m.add_pair(p[0], sk.inf[x], R23, R1);
        for w in p.windows(2) {
            m.add_pair(w[0], w[1], I2, R12);
            m.add_pair(w[1], w[0], R23, I1);
        }
        m.add_pair(sk.zero[x], q[0], R3, I1);
        m.add_pair(q[0], sk.zero[x], R2, R12);
        for w in q.windows(2) {
            m.add_pair(w[0], w[1], R23, I1);
            m.add_pair(w[1], w[0], I2, R12);
        }
        pos.push(p);
        neg.push(q);
    }
    let unit = BiLabel::unit(Idem::I2, Idem::I1);

    for a in &arrows.vertical {
        let (s, t, l) = (a.source, a.target, a.length as usize);
        m.add_pair(pos[s][l - 1], sk.inf[t], I2, R1);
        for i in 1..=pos_len[t] as usize {
            m.add_edge(pos[s][l + i - 1], pos[t][i - 1], &unit);
        }
        if l == 1 {
            m.add_pair(sk.zero[s], sk.inf[t], R1, R123);
        }
        let (tl, sl) = (*pos[t].last().expect("tail"), *pos[s].last().expect("tail"));
        m.add_pair(tl, sl, R23, R12);
    }

    for a in &arrows.horizontal {
        let (s, t, l) = (a.source, a.target, a.length as usize);
        m.add_pair(neg[s][l - 1], sk.zero[t], R2, I1);
        for i in 1..=neg_len[t] as usize {
            m.add_edge(neg[s][l + i - 1], neg[t][i - 1], &unit);
        }
        if l == 1 {
            m.add_pair(sk.zero[s], sk.inf[t], R123, R3);
        }
        let (tl, sl) = (*neg[t].last().expect("tail"), *neg[s].last().expect("tail"));
        m.add_pair(tl, sl, R23, R12);
    }

    // A unit square a → b → d, a → c → d of length-one arrows (horizontal
    // a → b and c → d, vertical a → c and b → d) also needs the diagonal
    // term a₀ → d_∞; without it the extras of its four sides cannot be
    // absorbed by a change of basis.
    let unit_len = |list: &[Arrow]| -> BTreeSet<(usize, usize)> {
        list.iter().filter(|a| a.length == 1).map(|a| (a.source, a.target)).collect()
    };
    let (vert1, horiz1) = (unit_len(&arrows.vertical), unit_len(&arrows.horizontal));
    let mut diagonals = BTreeSet::new();
    for &(a, b) in &horiz1 {
        for &(a2, c2) in &vert1 {
            if a2 != a {
                continue;
            }
            for &(b2, d) in &vert1 {
                if b2 == b && horiz1.contains(&(c2, d)) {
                    diagonals.insert((a, d));
                }
            }
        }
    }
    for (a, d) in diagonals {
        m.add_pair(sk.zero[a], sk.inf[d], R123, R123);
    }

    let h_end = *neg[arrows.y0].last().expect("tail");
    let v_end = *pos[arrows.x0].last().expect("tail");
    m.add_pair(h_end, v_end, R23, I1);
    m.add_pair(v_end, h_end, I2, R12);
    Ok(m)
}

/// Reduces an unreduced model and then removes the length-one extras, the
/// edges `x₀ → y_∞` between different knot generators, by a change of basis.
///
/// Fails with [`Error::NotAbsorbable`] when no change of basis fixing the
/// generators does it.
pub fn reduce_and_absorb(m: &DDModule) -> Result<DDModule> {
    let red = modules::reduce(m)?;
    let extras: Vec<(usize, usize)> = red
        .edges
        .keys()
        .copied()
        .filter(|&(s, t)| {
            matches!(
                (red.generators[s].role, red.generators[t].role),
                (Some(Role::Zero(a)), Some(Role::Inf(b))) if a != b
            )
        })
        .collect();
    match modules::absorb_edges(&red, &extras) {
        Some((out, _)) => Ok(out),
        None => Err(Error::NotAbsorbable(format!("{} extra edges survive reduction", extras.len()))),
    }
}

/// The type-D structure of the knot complement at framing `f ≤ 2τ`, over the
/// algebra of its single boundary torus.
pub fn build_cfd_knot(c: &CfkComplex, framing: i64) -> Result<DModule> {
    let arrows = cfk::arrows_of(c)?;
    let tau = c.generators[arrows.x0].alexander as i64;
    if framing > 2 * tau {
        return Err(Error::UnsupportedFraming(format!(
            "f = {framing} exceeds 2τ = {}; only f ≤ 2τ is supported for this module",
            2 * tau
        )));
    }
    if framing == 2 * tau && arrows.x0 == arrows.y0 {
        return Err(Error::UnsupportedFraming(format!(
            "f = 2τ with a single distinguished generator `{}` would need a ρ₁₂ self-loop",
            c.generators[arrows.x0].name
        )));
    }
    let mut d = DModule::new();
    let base: Vec<usize> = (0..c.generators.len())
        .map(|x| d.add_generator(c.generators[x].name.clone(), Idem::I1, Some(Role::Zero(x))))
        .collect();
    for a in &arrows.vertical {
        let ids: Vec<usize> = (1..=a.length as i32)
            .map(|i| d.add_generator(format!("kappa_{}_{i}", c.generators[a.source].name), Idem::I2, Some(Role::Tail(a.source, i))))
            .collect();
        d.add_chord(base[a.source], ids[0], R1);
        for w in ids.windows(2) {
            d.add_chord(w[1], w[0], R23);
        }
        d.add_chord(base[a.target], *ids.last().expect("tail"), R123);
    }
    for a in &arrows.horizontal {
        let ids: Vec<usize> = (1..=a.length as i32)
            .map(|i| d.add_generator(format!("lambda_{}_{i}", c.generators[a.source].name), Idem::I2, Some(Role::Tail(a.source, -i))))
            .collect();
        d.add_chord(base[a.source], ids[0], R3);
        for w in ids.windows(2) {
            d.add_chord(w[0], w[1], R23);
        }
        d.add_chord(*ids.last().expect("tail"), base[a.target], R2);
    }
    if framing == 2 * tau {
        d.add_chord(base[arrows.x0], base[arrows.y0], R12);
    } else {
        let len = (2 * tau - framing) as u32;
        let ids: Vec<usize> =
            (1..=len).map(|mu| d.add_generator(format!("mu_{mu}"), Idem::I2, Some(Role::Gamma(mu)))).collect();
        d.add_chord(base[arrows.x0], ids[0], R1);
        for w in ids.windows(2) {
            d.add_chord(w[1], w[0], R23);
        }
        d.add_chord(base[arrows.y0], *ids.last().expect("chain"), R3);
    }
    Ok(d)
}

/// The expected type-D structure of the meridian complement after 0-filling,
/// for framing `−n`, written down directly from the knot complex.
pub fn build_cfd_meridian_expected(c: &CfkComplex, n: i64) -> Result<DModule> {
    if n < 1 {
        return Err(Error::UnsupportedFraming(format!("n = {n} must be positive")));
    }
    let arrows = cfk::arrows_of(c)?;
    let tau = c.generators[arrows.x0].alexander as i64;
    let mut d = DModule::new();
    let inf: Vec<usize> = (0..c.generators.len())
        .map(|x| d.add_generator(gname(c, x, "inf"), Idem::I2, Some(Role::Inf(x))))
        .collect();
    let tail = |d: &mut DModule, x: usize, i: i32| d.add_generator(gname(c, x, i), Idem::I1, Some(Role::Tail(x, i)));

    for a in &arrows.vertical {
        let ids: Vec<usize> = (1..=a.length as i32).map(|i| tail(&mut d, a.source, i)).collect();
        d.add_chord(inf[a.source], ids[0], R2);
        for w in ids.windows(2) {
            d.add_chord(w[0], w[1], R12);
        }
        d.add_chord(*ids.last().expect("tail"), inf[a.target], R1);
    }
    for a in &arrows.horizontal {
        let ids: Vec<usize> = (1..=a.length as i32).map(|i| tail(&mut d, a.source, -i)).collect();
        d.add_chord(ids[0], inf[a.source], R123);
        for w in ids.windows(2) {
            d.add_chord(w[1], w[0], R12);
        }
        d.add_chord(*ids.last().expect("tail"), inf[a.target], R3);
    }

    let (h, v) = (inf[arrows.y0], inf[arrows.x0]);
    let m = n + 2 * tau;
    let gamma = |d: &mut DModule, mu: u32| d.add_generator(format!("gamma_{mu}"), Idem::I1, Some(Role::Gamma(mu)));
    if m >= 1 {
        let ids: Vec<usize> = (1..=m as u32).map(|mu| gamma(&mut d, mu)).collect();
        d.add_chord(ids[0], h, R123);
        for w in ids.windows(2) {
            d.add_chord(w[1], w[0], R12);
        }
        d.add_chord(v, *ids.last().expect("chain"), R2);
    } else if m == 0 {
        if h == v {
            return Err(Error::UnsupportedFraming(
                "n = −2τ with a single distinguished generator gives a σ₂₃ self-loop".into(),
            ));
        }
        d.add_chord(v, h, R23);
    } else {
        let ids: Vec<usize> = (1..=(-m) as u32).map(|mu| gamma(&mut d, mu)).collect();
        d.add_chord(ids[0], h, R3);
        for w in ids.windows(2) {
            d.add_chord(w[0], w[1], R12);
        }
        d.add_chord(*ids.last().expect("chain"), v, R1);
    }
    Ok(d)
}

/// `2g + Σ lengths + |f − 2τ|`, the generator count of [`build_dd_reduced`].
pub fn reduced_generator_count(c: &CfkComplex, framing: i64) -> Result<usize> {
    let a = cfk::arrows_of(c)?;
    let tau = c.generators[a.x0].alexander as i64;
    let lengths: u32 = a.vertical.iter().chain(&a.horizontal).map(|x| x.length).sum();
    Ok(2 * c.generators.len() + lengths as usize + (framing - 2 * tau).unsigned_abs() as usize)
}
