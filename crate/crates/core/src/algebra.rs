//! The Takiff Lie algebra `sl2 ⊗ C[x]/(x²)` and its universal enveloping algebra.
//!
//! Normal forms are PBW monomials in the fixed order `f < f̄ < h < h̄ < e < ē`
//! (lowering, Cartan, raising), so a Verma basis vector `f^i f̄^j v` is literally
//! a leading monomial.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::rational::{fmt_q, parse_q, q, Q};

/// Basis element of the Takiff algebra. Variant order is the PBW order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    F,
    FBar,
    H,
    HBar,
    E,
    EBar,
}

impl Generator {
    pub const ALL: [Generator; 6] =
        [Generator::F, Generator::FBar, Generator::H, Generator::HBar, Generator::E, Generator::EBar];

    /// Index in the PBW order.
    pub fn index(self) -> usize {
        self as usize
    }

    /// Eigenvalue of `ad h`.
    pub fn hweight(self) -> i64 {
        match self {
            Generator::E | Generator::EBar => 2,
            Generator::F | Generator::FBar => -2,
            Generator::H | Generator::HBar => 0,
        }
    }

    /// Power of `x` carried by the generator.
    pub fn bar_degree(self) -> u8 {
        match self {
            Generator::FBar | Generator::HBar | Generator::EBar => 1,
            _ => 0,
        }
    }

    /// Change of depth (distance below the top weight) when acting on a weight module.
    pub fn depth_shift(self) -> isize {
        -(self.hweight() as isize) / 2
    }

    pub fn is_raising(self) -> bool {
        self.hweight() > 0
    }

    pub fn is_lowering(self) -> bool {
        self.hweight() < 0
    }

    /// ASCII name used in JSON and on the command line.
    pub fn name(self) -> &'static str {
        match self {
            Generator::E => "e",
            Generator::F => "f",
            Generator::H => "h",
            Generator::EBar => "ebar",
            Generator::FBar => "fbar",
            Generator::HBar => "hbar",
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Generator::E => "e",
            Generator::F => "f",
            Generator::H => "h",
            Generator::EBar => "ē",
            Generator::FBar => "f̄",
            Generator::HBar => "h̄",
        }
    }

    pub fn with_bar(self, bar: bool) -> Generator {
        match (self.unbarred(), bar) {
            (g, false) => g,
            (Generator::E, true) => Generator::EBar,
            (Generator::F, true) => Generator::FBar,
            (_, true) => Generator::HBar,
        }
    }

    pub fn unbarred(self) -> Generator {
        match self {
            Generator::EBar => Generator::E,
            Generator::FBar => Generator::F,
            Generator::HBar => Generator::H,
            g => g,
        }
    }

    /// The anti-involution fixing `h, h̄` and swapping `e ↔ f`, `ē ↔ f̄`.
    pub fn sigma(self) -> Generator {
        match self {
            Generator::E => Generator::F,
            Generator::F => Generator::E,
            Generator::EBar => Generator::FBar,
            Generator::FBar => Generator::EBar,
            g => g,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.trim() {
            "e" => Generator::E,
            "f" => Generator::F,
            "h" => Generator::H,
            "ebar" | "ē" | "E" => Generator::EBar,
            "fbar" | "f̄" | "F" => Generator::FBar,
            "hbar" | "h̄" | "H" => Generator::HBar,
            other => return Err(Error::UnknownGenerator(other.to_string())),
        })
    }
}

/// Element of the Lie algebra, as a sparse combination of generators.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LieElement {
    terms: BTreeMap<Generator, Q>,
}

impl LieElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn generator(g: Generator) -> Self {
        Self::term(Q::one(), g)
    }

    pub fn term(c: Q, g: Generator) -> Self {
        let mut out = Self::zero();
        out.add_term(g, &c);
        out
    }

    pub fn add_term(&mut self, g: Generator, c: &Q) {
        let slot = self.terms.entry(g).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&g);
        }
    }

    pub fn coefficient(&self, g: Generator) -> Q {
        self.terms.get(&g).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Generator, &Q)> {
        self.terms.iter().map(|(&g, c)| (g, c))
    }

    pub fn plus(&self, other: &LieElement) -> LieElement {
        let mut out = self.clone();
        for (g, c) in other.terms() {
            out.add_term(g, c);
        }
        out
    }

    pub fn scaled(&self, c: &Q) -> LieElement {
        let mut out = LieElement::zero();
        for (g, x) in self.terms() {
            out.add_term(g, &(x * c));
        }
        out
    }
}

impl fmt::Display for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms().map(|(g, c)| coef_prefix(c, g.symbol())).collect();
        f.write_str(&join_signed(&parts))
    }
}

/// Bracket of two generators: the `sl2` table, with bar degrees adding and `x² = 0`.
pub fn bracket_generators(x: Generator, y: Generator) -> LieElement {
    let bar = x.bar_degree() + y.bar_degree();
    if bar > 1 {
        return LieElement::zero();
    }
    use Generator::{E, F, H};
    let (c, g) = match (x.unbarred(), y.unbarred()) {
        (E, F) => (1, H),
        (F, E) => (-1, H),
        (H, E) => (2, E),
        (E, H) => (-2, E),
        (H, F) => (-2, F),
        (F, H) => (2, F),
        _ => return LieElement::zero(),
    };
    LieElement::term(q(c), g.with_bar(bar == 1))
}

pub fn bracket(a: &LieElement, b: &LieElement) -> LieElement {
    let mut out = LieElement::zero();
    for (x, cx) in a.terms() {
        for (y, cy) in b.terms() {
            let c = cx * cy;
            for (g, cg) in bracket_generators(x, y).terms() {
                out.add_term(g, &(&c * cg));
            }
        }
    }
    out
}

/// Exponents of `f, f̄, h, h̄, e, ē`, in that order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PbwMonomial(pub [u32; 6]);

impl PbwMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn of(g: Generator) -> Self {
        let mut m = Self::one();
        m.0[g.index()] = 1;
        m
    }

    pub fn exponent(&self, g: Generator) -> u32 {
        self.0[g.index()]
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Total `ad h` weight.
    pub fn hweight(&self) -> i64 {
        Generator::ALL.iter().map(|&g| g.hweight() * i64::from(self.exponent(g))).sum()
    }

    fn first(&self) -> Option<Generator> {
        Generator::ALL.iter().copied().find(|&g| self.exponent(g) > 0)
    }

    fn without_first(&self) -> Option<(Generator, PbwMonomial)> {
        let g = self.first()?;
        let mut rest = *self;
        rest.0[g.index()] -= 1;
        Some((g, rest))
    }

    fn with_extra(&self, g: Generator) -> PbwMonomial {
        let mut m = *self;
        m.0[g.index()] += 1;
        m
    }

    pub fn as_word(&self) -> Vec<Generator> {
        Generator::ALL.iter().flat_map(|&g| std::iter::repeat_n(g, self.exponent(g) as usize)).collect()
    }
}

impl fmt::Display for PbwMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() == 0 {
            return f.write_str("1");
        }
        let parts: Vec<String> = Generator::ALL
            .iter()
            .filter(|&&g| self.exponent(g) > 0)
            .map(|&g| match self.exponent(g) {
                1 => g.symbol().to_string(),
                k => format!("{}^{}", g.symbol(), k),
            })
            .collect();
        f.write_str(&parts.join("·"))
    }
}

/// Element of `U(g)` in PBW normal form.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EnvelopingElement {
    terms: BTreeMap<PbwMonomial, Q>,
}

impl EnvelopingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Q::one(), PbwMonomial::one())
    }

    pub fn monomial(c: Q, m: PbwMonomial) -> Self {
        let mut out = Self::zero();
        out.add_term(m, &c);
        out
    }

    pub fn add_term(&mut self, m: PbwMonomial, c: &Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add_scaled(&mut self, c: &Q, other: &EnvelopingElement) {
        for (m, x) in other.terms() {
            self.add_term(*m, &(c * x));
        }
    }

    pub fn coefficient(&self, m: &PbwMonomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PbwMonomial, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn minus(&self, other: &EnvelopingElement) -> EnvelopingElement {
        let mut out = self.clone();
        out.add_scaled(&-Q::one(), other);
        out
    }

    /// As a formal sum of words, for feeding back through the straightener.
    pub fn to_expression(&self) -> Expression {
        Expression { terms: self.terms().map(|(m, c)| (c.clone(), m.as_word())).collect() }
    }
}

impl fmt::Display for EnvelopingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms().map(|(m, c)| coef_prefix(c, &m.to_string())).collect();
        f.write_str(&join_signed(&parts))
    }
}

fn coef_prefix(c: &Q, body: &str) -> String {
    if body == "1" {
        fmt_q(c)
    } else if c.is_one() {
        body.to_string()
    } else if *c == -Q::one() {
        format!("-{body}")
    } else {
        format!("{}·{}", fmt_q(c), body)
    }
}

fn join_signed(parts: &[String]) -> String {
    let mut out = String::new();
    for (i, p) in parts.iter().enumerate() {
        match (i, p.strip_prefix('-')) {
            (0, _) => out.push_str(p),
            (_, Some(rest)) => {
                out.push_str(" - ");
                out.push_str(rest);
            }
            (_, None) => {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
    }
    out
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: [u32; 6],
    #[serde(serialize_with = "crate::rational::ser_q", deserialize_with = "crate::rational::de_q")]
    coef: Q,
}

#[derive(Serialize, Deserialize)]
struct EnvelopingJson {
    terms: Vec<TermJson>,
}

impl Serialize for EnvelopingElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        EnvelopingJson { terms: self.terms().map(|(m, c)| TermJson { exp: m.0, coef: c.clone() }).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for EnvelopingElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = EnvelopingJson::deserialize(d)?;
        let mut out = EnvelopingElement::zero();
        for t in raw.terms {
            out.add_term(PbwMonomial(t.exp), &t.coef);
        }
        Ok(out)
    }
}

/// A formal sum of words in the generators, not yet normal-ordered.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Expression {
    pub terms: Vec<(Q, Vec<Generator>)>,
}

impl Expression {
    pub fn word(w: &[Generator]) -> Self {
        Self { terms: vec![(Q::one(), w.to_vec())] }
    }

    pub fn plus(mut self, c: Q, w: &[Generator]) -> Self {
        self.terms.push((c, w.to_vec()));
        self
    }

    /// Concatenation product.
    pub fn times(&self, other: &Expression) -> Expression {
        let mut terms = Vec::new();
        for (a, u) in &self.terms {
            for (b, w) in &other.terms {
                let mut uw = u.clone();
                uw.extend_from_slice(w);
                terms.push((a * b, uw));
            }
        }
        Expression { terms }
    }

    pub fn minus(&self, other: &Expression) -> Expression {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().map(|(c, w)| (-c, w.clone())));
        Expression { terms }
    }
}

/// Parses sums like `e*fbar*fbar + 2*h - 1/2 f^2 e`.
impl FromStr for Expression {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut terms = Vec::new();
        let mut sign = Q::one();
        let mut current = String::new();
        let flush = |chunk: &str, sign: &Q, terms: &mut Vec<(Q, Vec<Generator>)>| -> Result<(), Error> {
            let chunk = chunk.trim();
            if chunk.is_empty() {
                return Err(Error::Invalid(format!("empty term in `{s}`")));
            }
            let mut coef = sign.clone();
            let mut word = Vec::new();
            for factor in chunk.split(|c: char| c == '*' || c == '·' || c.is_whitespace()).filter(|t| !t.is_empty()) {
                if factor.starts_with(|c: char| c.is_ascii_digit()) {
                    coef *= parse_q(factor)?;
                    continue;
                }
                let (name, power) = match factor.split_once('^') {
                    Some((n, p)) => (n, p.parse::<usize>().map_err(|_| Error::Invalid(factor.to_string()))?),
                    None => (factor, 1),
                };
                let g: Generator = name.parse()?;
                word.extend(std::iter::repeat_n(g, power));
            }
            terms.push((coef, word));
            Ok(())
        };
        let mut depth_started = false;
        for ch in s.chars() {
            if (ch == '+' || ch == '-') && !current.trim_end().ends_with('/') {
                if depth_started {
                    flush(&current, &sign, &mut terms)?;
                }
                current.clear();
                depth_started = false;
                sign = if ch == '-' { -Q::one() } else { Q::one() };
            } else {
                if !ch.is_whitespace() {
                    depth_started = true;
                }
                current.push(ch);
            }
        }
        if depth_started {
            flush(&current, &sign, &mut terms)?;
        }
        if terms.is_empty() {
            return Err(Error::Invalid(format!("empty expression `{s}`")));
        }
        Ok(Expression { terms })
    }
}

/// Normal-orders products by repeatedly rewriting an out-of-order adjacent pair
/// `x·y → y·x + [x,y]`, leftmost pair first. Left multiplications by a single
/// generator on a normal monomial are memoized.
#[derive(Default)]
pub struct Straightener {
    cache: HashMap<(Generator, PbwMonomial), EnvelopingElement>,
}

impl Straightener {
    pub fn new() -> Self {
        Self::default()
    }

    /// `g · m` in normal form.
    pub fn left_mul(&mut self, g: Generator, m: &PbwMonomial) -> EnvelopingElement {
        let Some((x, rest)) = m.without_first() else {
            return EnvelopingElement::monomial(Q::one(), PbwMonomial::of(g));
        };
        if g <= x {
            return EnvelopingElement::monomial(Q::one(), m.with_extra(g));
        }
        if let Some(hit) = self.cache.get(&(g, *m)) {
            return hit.clone();
        }
        // g·x·rest = x·(g·rest) + [g,x]·rest
        let mut out = EnvelopingElement::zero();
        let inner = self.left_mul(g, &rest);
        for (m2, c) in inner.terms() {
            let t = self.left_mul(x, m2);
            out.add_scaled(c, &t);
        }
        for (y, c) in bracket_generators(g, x).terms() {
            let t = self.left_mul(y, &rest);
            out.add_scaled(c, &t);
        }
        self.cache.insert((g, *m), out.clone());
        out
    }

    /// `g · u` for a normal-form `u`.
    pub fn left_mul_element(&mut self, g: Generator, u: &EnvelopingElement) -> EnvelopingElement {
        let mut out = EnvelopingElement::zero();
        for (m, c) in u.terms() {
            let t = self.left_mul(g, m);
            out.add_scaled(c, &t);
        }
        out
    }

    pub fn word(&mut self, w: &[Generator]) -> EnvelopingElement {
        let mut acc = EnvelopingElement::one();
        for &g in w.iter().rev() {
            acc = self.left_mul_element(g, &acc);
        }
        acc
    }

    pub fn straighten(&mut self, expr: &Expression) -> EnvelopingElement {
        let mut out = EnvelopingElement::zero();
        for (c, w) in &expr.terms {
            let t = self.word(w);
            out.add_scaled(c, &t);
        }
        out
    }

    /// Product of two normal forms.
    pub fn mul(&mut self, a: &EnvelopingElement, b: &EnvelopingElement) -> EnvelopingElement {
        let mut out = EnvelopingElement::zero();
        for (m, c) in a.terms() {
            let mut acc = b.clone();
            for g in m.as_word().into_iter().rev() {
                acc = self.left_mul_element(g, &acc);
            }
            out.add_scaled(c, &acc);
        }
        out
    }
}

pub fn straighten(expr: &Expression) -> EnvelopingElement {
    Straightener::new().straighten(expr)
}

/// Which out-of-order pair the literal rewriter picks in each step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Schedule {
    Leftmost,
    Rightmost,
}

/// Straightening by literal word rewriting on a multiset of words, with no
/// memoization or shortcut. Slow but independent of [`Straightener`].
pub fn rewrite(expr: &Expression, schedule: Schedule) -> EnvelopingElement {
    let mut pending: BTreeMap<Vec<Generator>, Q> = BTreeMap::new();
    let mut done = EnvelopingElement::zero();
    let push = |pending: &mut BTreeMap<Vec<Generator>, Q>, w: Vec<Generator>, c: Q| {
        let slot = pending.entry(w.clone()).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            pending.remove(&w);
        }
    };
    for (c, w) in &expr.terms {
        push(&mut pending, w.clone(), c.clone());
    }
    while let Some((w, c)) = pending.pop_first() {
        let bad: Vec<usize> = (0..w.len().saturating_sub(1)).filter(|&i| w[i] > w[i + 1]).collect();
        let Some(&i) = (match schedule {
            Schedule::Leftmost => bad.first(),
            Schedule::Rightmost => bad.last(),
        }) else {
            let mut m = PbwMonomial::one();
            for g in &w {
                m.0[g.index()] += 1;
            }
            done.add_term(m, &c);
            continue;
        };
        let (x, y) = (w[i], w[i + 1]);
        let mut swapped = w.clone();
        swapped.swap(i, i + 1);
        push(&mut pending, swapped, c.clone());
        for (g, cg) in bracket_generators(x, y).terms() {
            let mut nw = w[..i].to_vec();
            nw.push(g);
            nw.extend_from_slice(&w[i + 2..]);
            push(&mut pending, nw, &c * cg);
        }
    }
    done
}

/// The Casimir element `h·h̄ + 2h̄ + 2f·ē + 2f̄·e`.
pub fn casimir_expression() -> Expression {
    use Generator::*;
    Expression::word(&[H, HBar]).plus(q(2), &[HBar]).plus(q(2), &[F, EBar]).plus(q(2), &[FBar, E])
}

pub fn casimir() -> EnvelopingElement {
    straighten(&casimir_expression())
}

/// `c·g − g·c` in normal form.
pub fn commutator_with_generator(c: &EnvelopingElement, g: Generator) -> EnvelopingElement {
    let mut s = Straightener::new();
    let gg = EnvelopingElement::monomial(Q::one(), PbwMonomial::of(g));
    let left = s.mul(c, &gg);
    let right = s.mul(&gg, c);
    left.minus(&right)
}

#[cfg(test)]
mod tests {
    use super::Generator::*;
    use super::*;

    fn mono(exp: [u32; 6]) -> PbwMonomial {
        PbwMonomial(exp)
    }

    #[test]
    fn bracket_table() {
        assert_eq!(bracket_generators(E, F), LieElement::generator(H));
        assert!(bracket_generators(EBar, FBar).is_zero());
        assert_eq!(bracket_generators(HBar, E), LieElement::term(q(2), EBar));
        assert_eq!(bracket_generators(E, FBar), LieElement::generator(HBar));
        assert_eq!(bracket_generators(EBar, F), LieElement::generator(HBar));
        assert_eq!(bracket_generators(H, FBar), LieElement::term(q(-2), FBar));
        assert_eq!(bracket_generators(HBar, F), LieElement::term(q(-2), FBar));
    }

    #[test]
    fn generator_weights() {
        assert_eq!(Generator::ALL.iter().map(|g| g.hweight()).collect::<Vec<_>>(), [-2, -2, 0, 0, 2, 2]);
        assert_eq!(Generator::ALL.iter().filter(|g| g.bar_degree() == 1).count(), 3);
    }

    #[test]
    fn straighten_ef() {
        let got = straighten(&Expression::word(&[E, F]));
        let mut want = EnvelopingElement::monomial(Q::one(), mono([1, 0, 0, 0, 1, 0]));
        want.add_term(mono([0, 0, 1, 0, 0, 0]), &Q::one());
        assert_eq!(got, want);
    }

    #[test]
    fn straighten_e_fbar_fbar() {
        // e·f̄·f̄ = f̄²·e + 2·f̄·h̄
        let got = straighten(&Expression::word(&[E, FBar, FBar]));
        let mut want = EnvelopingElement::monomial(Q::one(), mono([0, 2, 0, 0, 1, 0]));
        want.add_term(mono([0, 1, 0, 1, 0, 0]), &q(2));
        assert_eq!(got, want);
        assert_eq!(rewrite(&Expression::word(&[E, FBar, FBar]), Schedule::Rightmost), want);
    }

    #[test]
    fn normal_words_are_fixed() {
        let w = [F, F, H];
        assert_eq!(straighten(&Expression::word(&w)), EnvelopingElement::monomial(Q::one(), mono([2, 0, 1, 0, 0, 0])));
    }

    #[test]
    fn casimir_shape() {
        let c = casimir();
        assert_eq!(c.coefficient(&mono([0, 0, 1, 1, 0, 0])), q(1));
        assert_eq!(c.coefficient(&mono([0, 0, 0, 1, 0, 0])), q(2));
        assert_eq!(c.len(), 4);
    }

    #[test]
    fn casimir_commutes_with_e_and_fbar() {
        let c = casimir();
        assert!(commutator_with_generator(&c, E).is_zero());
        assert!(commutator_with_generator(&c, FBar).is_zero());
    }

    #[test]
    fn parse_expression() {
        let e: Expression = "e*fbar*fbar + 2*h - 1/2 f^2 e".parse().unwrap();
        assert_eq!(e.terms.len(), 3);
        assert_eq!(e.terms[2].0, crate::rational::q_frac(-1, 2));
        assert_eq!(e.terms[2].1, vec![F, F, E]);
        assert!("e * q".parse::<Expression>().is_err());
    }

    #[test]
    fn json_sorted_by_exponent() {
        let c = casimir();
        let s = serde_json::to_string(&c).unwrap();
        let back: EnvelopingElement = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
        assert!(s.starts_with(r#"{"terms":[{"exp":[0,0,0,1,0,0],"coef":"2"}"#), "{s}");
    }
}
