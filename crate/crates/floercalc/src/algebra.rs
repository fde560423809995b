//! The torus algebra A(T²) over F₂ and the two-sided labels used on type-DD edges.
//!
//! The algebra is eight-dimensional: two idempotents and six Reeb chords.
//! Elements are F₂-linear combinations stored as sorted sets, so addition is
//! symmetric difference and `a + a = 0`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::SchemaError;
use crate::grading::GradingElement;

/// One of the two idempotents of the torus algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Idem {
    I1,
    I2,
}

impl Idem {
    pub fn chord(self) -> Chord {
        match self {
            Idem::I1 => Chord::I1,
            Idem::I2 => Chord::I2,
        }
    }

    /// Serialized name for a left-side idempotent.
    pub fn left_name(self) -> &'static str {
        match self {
            Idem::I1 => "i1",
            Idem::I2 => "i2",
        }
    }

    /// Serialized name for a right-side idempotent.
    pub fn right_name(self) -> &'static str {
        match self {
            Idem::I1 => "j1",
            Idem::I2 => "j2",
        }
    }

    pub fn parse_left(s: &str) -> Result<Idem, SchemaError> {
        match s {
            "i1" => Ok(Idem::I1),
            "i2" => Ok(Idem::I2),
            _ => Err(SchemaError::new(format!("unknown left idempotent `{s}`"))),
        }
    }

    pub fn parse_right(s: &str) -> Result<Idem, SchemaError> {
        match s {
            "j1" => Ok(Idem::I1),
            "j2" => Ok(Idem::I2),
            _ => Err(SchemaError::new(format!("unknown right idempotent `{s}`"))),
        }
    }
}

/// A basis element of A(T²).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Chord {
    I1,
    I2,
    R1,
    R2,
    R3,
    R12,
    R23,
    R123,
}

impl Chord {
    pub const ALL: [Chord; 8] = [
        Chord::I1,
        Chord::I2,
        Chord::R1,
        Chord::R2,
        Chord::R3,
        Chord::R12,
        Chord::R23,
        Chord::R123,
    ];

    pub fn is_idempotent(self) -> bool {
        matches!(self, Chord::I1 | Chord::I2)
    }

    /// The idempotent `ι` with `ι·c = c`.
    pub fn left_idem(self) -> Idem {
        match self {
            Chord::I1 | Chord::R1 | Chord::R3 | Chord::R12 | Chord::R123 => Idem::I1,
            Chord::I2 | Chord::R2 | Chord::R23 => Idem::I2,
        }
    }

    /// The idempotent `ι` with `c·ι = c`.
    pub fn right_idem(self) -> Idem {
        match self {
            Chord::I1 | Chord::R2 | Chord::R12 => Idem::I1,
            Chord::I2 | Chord::R1 | Chord::R3 | Chord::R23 | Chord::R123 => Idem::I2,
        }
    }

    /// Product of two basis elements; `None` is zero.
    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: Chord) -> Option<Chord> {
        use Chord::*;
        if self.is_idempotent() {
            return (self.left_idem() == other.left_idem()).then_some(other);
        }
        if other.is_idempotent() {
            return (self.right_idem() == other.left_idem()).then_some(self);
        }
        match (self, other) {
            (R1, R2) => Some(R12),
            (R2, R3) => Some(R23),
            (R1, R23) | (R12, R3) => Some(R123),
            _ => None,
        }
    }

    /// The subscript string, e.g. `"123"` for ρ₁₂₃; empty for idempotents.
    pub fn subscript(self) -> &'static str {
        match self {
            Chord::I1 | Chord::I2 => "",
            Chord::R1 => "1",
            Chord::R2 => "2",
            Chord::R3 => "3",
            Chord::R12 => "12",
            Chord::R23 => "23",
            Chord::R123 => "123",
        }
    }

    /// Serialized left-side name (`i1`, `r12`, ...).
    pub fn left_name(self) -> String {
        match self {
            Chord::I1 => "i1".into(),
            Chord::I2 => "i2".into(),
            c => format!("r{}", c.subscript()),
        }
    }

    /// Serialized right-side name (`j1`, `s12`, ...).
    pub fn right_name(self) -> String {
        match self {
            Chord::I1 => "j1".into(),
            Chord::I2 => "j2".into(),
            c => format!("s{}", c.subscript()),
        }
    }

    fn from_subscript(s: &str) -> Option<Chord> {
        Some(match s {
            "1" => Chord::R1,
            "2" => Chord::R2,
            "3" => Chord::R3,
            "12" => Chord::R12,
            "23" => Chord::R23,
            "123" => Chord::R123,
            _ => return None,
        })
    }

    /// Parses a left-side name: `i1`, `i2`, `r1` ... `r123`.
    pub fn parse_left(s: &str) -> Result<Chord, SchemaError> {
        match s {
            "i1" => Ok(Chord::I1),
            "i2" => Ok(Chord::I2),
            _ => s
                .strip_prefix('r')
                .and_then(Chord::from_subscript)
                .ok_or_else(|| SchemaError::new(format!("unknown left chord `{s}`"))),
        }
    }

    /// Parses a right-side name: `j1`, `j2`, `s1` ... `s123`.
    pub fn parse_right(s: &str) -> Result<Chord, SchemaError> {
        match s {
            "j1" => Ok(Chord::I1),
            "j2" => Ok(Chord::I2),
            _ => s
                .strip_prefix('s')
                .and_then(Chord::from_subscript)
                .ok_or_else(|| SchemaError::new(format!("unknown right chord `{s}`"))),
        }
    }

    /// Grading in G; idempotents grade as the identity.
    pub fn grading(self) -> GradingElement {
        gr_chord(self)
    }
}

impl FromStr for Chord {
    type Err = SchemaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Chord::parse_left(s)
    }
}

impl fmt::Display for Chord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.left_name())
    }
}

/// Product of two chords as an algebra element.
pub fn multiply(a: Chord, b: Chord) -> AlgebraElement {
    AlgebraElement::from_iter(a.mul(b))
}

/// Grading of a chord: the three short chords are fixed, longer chords are
/// products of their factors, and idempotents are the identity.
pub fn gr_chord(c: Chord) -> GradingElement {
    let r1 = GradingElement::from_halves(-1, 1, -1);
    let r2 = GradingElement::from_halves(-1, 1, 1);
    let r3 = GradingElement::from_halves(-1, -1, 1);
    match c {
        Chord::I1 | Chord::I2 => GradingElement::identity(),
        Chord::R1 => r1,
        Chord::R2 => r2,
        Chord::R3 => r3,
        Chord::R12 => r1 * r2,
        Chord::R23 => r2 * r3,
        Chord::R123 => r1 * r2 * r3,
    }
}

/// An F₂-linear combination of chords.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AlgebraElement(BTreeSet<Chord>);

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn chord(c: Chord) -> Self {
        Self::from_iter([c])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = Chord> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_term(&mut self, c: Chord) {
        if !self.0.remove(&c) {
            self.0.insert(c);
        }
    }

    pub fn add_assign(&mut self, other: &AlgebraElement) {
        for c in other.terms() {
            self.add_term(c);
        }
    }

    pub fn mul(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for a in self.terms() {
            for b in other.terms() {
                if let Some(c) = a.mul(b) {
                    out.add_term(c);
                }
            }
        }
        out
    }
}

impl FromIterator<Chord> for AlgebraElement {
    /// Collects with F₂ cancellation: repeated chords cancel in pairs.
    fn from_iter<T: IntoIterator<Item = Chord>>(iter: T) -> Self {
        let mut out = AlgebraElement::zero();
        for c in iter {
            out.add_term(c);
        }
        out
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms().map(|c| render_side(c, 'σ')).collect();
        f.write_str(&parts.join("+"))
    }
}

/// An F₂-linear combination of left⊗right chord pairs (ρ on the left, σ on the right).
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BiLabel(BTreeSet<(Chord, Chord)>);

impl BiLabel {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn pair(left: Chord, right: Chord) -> Self {
        Self::from_iter([(left, right)])
    }

    /// The unit pair ι⊗ĵ for the given idempotents.
    pub fn unit(left: Idem, right: Idem) -> Self {
        Self::pair(left.chord(), right.chord())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// True when the label is exactly one idempotent⊗idempotent pair.
    pub fn is_unit(&self) -> bool {
        self.0.len() == 1 && self.terms().all(|(l, r)| l.is_idempotent() && r.is_idempotent())
    }

    pub fn terms(&self) -> impl Iterator<Item = (Chord, Chord)> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_term(&mut self, term: (Chord, Chord)) {
        if !self.0.remove(&term) {
            self.0.insert(term);
        }
    }

    pub fn add_assign(&mut self, other: &BiLabel) {
        for t in other.terms() {
            self.add_term(t);
        }
    }

    /// Componentwise product in A⊗A, bilinearly extended.
    pub fn mul(&self, other: &BiLabel) -> BiLabel {
        let mut out = BiLabel::zero();
        for (a, b) in self.terms() {
            for (c, d) in other.terms() {
                if let (Some(l), Some(r)) = (a.mul(c), b.mul(d)) {
                    out.add_term((l, r));
                }
            }
        }
        out
    }

    /// Serialized form: a list of `[left, right]` name pairs.
    pub fn to_names(&self) -> Vec<[String; 2]> {
        self.terms().map(|(l, r)| [l.left_name(), r.right_name()]).collect()
    }

    pub fn from_names(pairs: &[[String; 2]]) -> Result<BiLabel, SchemaError> {
        let mut out = BiLabel::zero();
        for [l, r] in pairs {
            out.add_term((Chord::parse_left(l)?, Chord::parse_right(r)?));
        }
        Ok(out)
    }
}

impl FromIterator<(Chord, Chord)> for BiLabel {
    fn from_iter<T: IntoIterator<Item = (Chord, Chord)>>(iter: T) -> Self {
        let mut out = BiLabel::zero();
        for t in iter {
            out.add_term(t);
        }
        out
    }
}

/// Product of two bilabels.
pub fn multiply_bilabel(a: &BiLabel, b: &BiLabel) -> BiLabel {
    a.mul(b)
}

fn render_side(c: Chord, greek: char) -> String {
    if c.is_idempotent() {
        return String::new();
    }
    let sub: String = c
        .subscript()
        .chars()
        .map(|d| match d {
            '1' => '₁',
            '2' => '₂',
            '3' => '₃',
            other => other,
        })
        .collect();
    format!("{greek}{sub}")
}

impl fmt::Display for BiLabel {
    /// Renders as `ρ₁σ₃+ρ₁₂₃σ₁₂₃`; a bare unit pair renders as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(l, r)| {
                let s = format!("{}{}", render_side(l, 'ρ'), render_side(r, 'σ'));
                if s.is_empty() {
                    "1".to_string()
                } else {
                    s
                }
            })
            .collect();
        f.write_str(&parts.join("+"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Chord::*;

    #[test]
    fn listed_products() {
        assert_eq!(multiply(R1, R2), AlgebraElement::chord(R12));
        assert_eq!(multiply(R2, R3), AlgebraElement::chord(R23));
        assert_eq!(multiply(R1, R23), AlgebraElement::chord(R123));
        assert_eq!(multiply(R12, R3), AlgebraElement::chord(R123));
        assert_eq!(multiply(I1, R1), AlgebraElement::chord(R1));
        assert_eq!(multiply(R1, I2), AlgebraElement::chord(R1));
    }

    #[test]
    fn vanishing_products() {
        assert!(multiply(R2, R1).is_zero());
        assert!(multiply(I1, R2).is_zero());
        assert!(multiply(R3, R1).is_zero());
        assert!(multiply(I1, I2).is_zero());
    }

    #[test]
    fn bilabel_products() {
        // componentwise: ρ₂ρ₁ = 0 kills the first product whatever σ₁₂σ₃ is
        let b = BiLabel::pair(R1, R3);
        assert!(BiLabel::pair(R2, R12).mul(&b).is_zero());
        let oracle = (multiply(R1, R2), multiply(R12, R3));
        assert_eq!(oracle, (AlgebraElement::chord(R12), AlgebraElement::chord(R123)));
        assert_eq!(BiLabel::pair(R1, R12).mul(&BiLabel::pair(R2, R3)), BiLabel::pair(R12, R123));
        assert!(BiLabel::pair(I2, R3).mul(&BiLabel::pair(I2, R1)).is_zero());
        assert_eq!(BiLabel::unit(Idem::I1, Idem::I1).mul(&b), b);
    }

    #[test]
    fn names_round_trip() {
        for c in Chord::ALL {
            assert_eq!(Chord::parse_left(&c.left_name()).unwrap(), c);
            assert_eq!(Chord::parse_right(&c.right_name()).unwrap(), c);
        }
        assert!(Chord::parse_left("s1").is_err());
    }

    #[test]
    fn display() {
        let l: BiLabel = [(R1, R3), (R123, R123)].into_iter().collect();
        assert_eq!(l.to_string(), "ρ₁σ₃+ρ₁₂₃σ₁₂₃");
        assert_eq!(BiLabel::pair(I2, R2).to_string(), "σ₂");
        assert_eq!(BiLabel::unit(Idem::I2, Idem::I1).to_string(), "1");
    }
}
