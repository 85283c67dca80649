//! Depth-truncated generalized weight modules with explicit action matrices.
//!
//! A module lives on the weights `top − nα` for depths `n = 0..=N`. Each generator
//! moves depth by its shift: raising generators by −1, lowering by +1, Cartan by 0.
//! Matrices use the column convention: column `j` of the matrix for `g` at depth `n`
//! is the image of the `j`-th basis vector of depth `n`.

use std::collections::BTreeMap;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::algebra::{bracket_generators, EnvelopingElement, Generator, PbwMonomial, Straightener};
use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseMatrix, SparseVec};
use crate::rational::{as_nonneg_int, fmt_q, parse_q, q, Q};
use crate::weight::Weight;

/// Which version of category O an extension is required to live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CategoryFlag {
    /// `h` acts diagonalizably.
    O,
    /// Thick category: only local finiteness.
    #[serde(rename = "Otilde")]
    OTilde,
}

impl CategoryFlag {
    pub fn name(self) -> &'static str {
        match self {
            CategoryFlag::O => "O",
            CategoryFlag::OTilde => "Otilde",
        }
    }
}

impl std::str::FromStr for CategoryFlag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "O" => Ok(CategoryFlag::O),
            "Otilde" | "O_tilde" | "Õ" => Ok(CategoryFlag::OTilde),
            _ => Err(Error::Invalid(format!("unknown category `{s}` (expected O or Otilde)"))),
        }
    }
}

/// Converts a user-supplied depth, rejecting negatives.
pub fn depth_from_i64(n: i64) -> Result<usize> {
    usize::try_from(n).map_err(|_| Error::NegativeDepth(n))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedModule {
    top: Weight,
    dims: Vec<usize>,
    /// `actions[g][n]`: present when `n + shift(g)` lies in `0..=N`.
    actions: [Vec<Option<SparseMatrix>>; 6],
    /// Set when the module continues below depth `N`, so lowering out of the
    /// window is truncated rather than genuinely zero.
    truncated: bool,
}

impl TruncatedModule {
    /// Assembles a module from per-depth matrices, checking shapes.
    pub fn from_parts(
        top: Weight,
        dims: Vec<usize>,
        mut actions: BTreeMap<Generator, Vec<Option<SparseMatrix>>>,
        truncated: bool,
    ) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Invalid("a module needs at least depth 0".into()));
        }
        let n_max = dims.len() - 1;
        let mut table: [Vec<Option<SparseMatrix>>; 6] = Default::default();
        for g in Generator::ALL {
            let mut per_depth = actions.remove(&g).unwrap_or_default();
            per_depth.resize(dims.len(), None);
            for (n, slot) in per_depth.iter_mut().enumerate() {
                let t = n as isize + g.depth_shift();
                if t < 0 || t as usize > n_max {
                    if slot.is_some() {
                        return Err(Error::Invalid(format!("{} at depth {n} leaves the window", g.name())));
                    }
                    continue;
                }
                let want = (dims[t as usize], dims[n]);
                let m = slot.get_or_insert_with(|| SparseMatrix::zeros(want.0, want.1));
                if (m.nrows(), m.ncols()) != want {
                    return Err(Error::Invalid(format!(
                        "{} at depth {n}: expected {}x{}, got {}x{}",
                        g.name(),
                        want.0,
                        want.1,
                        m.nrows(),
                        m.ncols()
                    )));
                }
            }
            table[g.index()] = per_depth;
        }
        Ok(Self { top, dims, actions: table, truncated })
    }

    pub fn zero(top: Weight, depth: usize) -> Self {
        Self::from_parts(top, vec![0; depth + 1], BTreeMap::new(), false).expect("zero module is well formed")
    }

    pub fn top(&self) -> &Weight {
        &self.top
    }

    /// Truncation depth `N`.
    pub fn depth(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim_at(&self, n: isize) -> usize {
        if n < 0 || n as usize > self.depth() {
            0
        } else {
            self.dims[n as usize]
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn weight_at(&self, n: usize) -> Weight {
        self.top.lowered(n as i64)
    }

    /// Stored matrix for `g` at depth `n`, if its target lies inside `0..=N`.
    pub fn matrix(&self, g: Generator, n: usize) -> Option<&SparseMatrix> {
        self.actions[g.index()].get(n).and_then(Option::as_ref)
    }

    /// Matrix of `g` at depth `n`, or `None` when the target is cut off by truncation.
    /// Targets above the top (or below a closed bottom) give a zero-row matrix.
    pub fn act(&self, g: Generator, n: usize) -> Option<SparseMatrix> {
        let t = n as isize + g.depth_shift();
        if t < 0 {
            return Some(SparseMatrix::zeros(0, self.dims[n]));
        }
        if t as usize > self.depth() {
            return if self.truncated { None } else { Some(SparseMatrix::zeros(0, self.dims[n])) };
        }
        self.matrix(g, n).cloned()
    }

    pub fn act_vec(&self, g: Generator, n: usize, v: &SparseVec) -> Option<SparseVec> {
        self.act(g, n).map(|m| m.apply(v))
    }

    /// Composite action of a word (rightmost letter first) starting at depth `n`.
    /// Returns the target depth and the matrix.
    pub fn act_word(&self, word: &[Generator], n: usize) -> Option<(isize, SparseMatrix)> {
        let mut depth = n as isize;
        let mut acc = SparseMatrix::identity(self.dims[n]);
        for &g in word.iter().rev() {
            let t = depth + g.depth_shift();
            let m = if depth < 0 || depth as usize > self.depth() {
                // already in the zero part above the top or below a closed bottom
                SparseMatrix::zeros(self.dim_at(t), acc.nrows())
            } else {
                match self.act(g, depth as usize) {
                    Some(m) if m.nrows() == self.dim_at(t) => m,
                    Some(_) => SparseMatrix::zeros(self.dim_at(t), acc.nrows()),
                    None => return None,
                }
            };
            acc = m.mul(&acc);
            depth = t;
        }
        Some((depth, acc))
    }

    /// Action at depth `n` of a depth-preserving element of `U(g)`.
    pub fn act_element(&self, u: &EnvelopingElement, n: usize) -> Option<SparseMatrix> {
        let mut out = SparseMatrix::zeros(self.dims[n], self.dims[n]);
        for (m, c) in u.terms() {
            if m.hweight() != 0 {
                return None;
            }
            let (_, mat) = self.act_word(&m.as_word(), n)?;
            out = out.add_scaled(c, &mat);
        }
        Some(out)
    }

    /// Restriction to depths `0..=k`.
    pub fn restrict(&self, k: usize) -> TruncatedModule {
        assert!(k <= self.depth());
        let mut actions = BTreeMap::new();
        for g in Generator::ALL {
            let v: Vec<Option<SparseMatrix>> = (0..=k)
                .map(|n| {
                    let t = n as isize + g.depth_shift();
                    if t < 0 || t as usize > k {
                        None
                    } else {
                        self.matrix(g, n).cloned()
                    }
                })
                .collect();
            actions.insert(g, v);
        }
        let truncated = self.truncated || self.dims[k + 1..].iter().any(|&d| d > 0);
        TruncatedModule::from_parts(self.top.clone(), self.dims[..=k].to_vec(), actions, truncated)
            .expect("restriction keeps shapes")
    }

    pub fn direct_sum(&self, other: &TruncatedModule) -> Result<TruncatedModule> {
        if self.top != other.top || self.depth() != other.depth() {
            return Err(Error::Invalid("direct sum needs equal top weight and depth".into()));
        }
        let dims: Vec<usize> = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let mut actions = BTreeMap::new();
        for g in Generator::ALL {
            let v = (0..dims.len())
                .map(|n| match (self.matrix(g, n), other.matrix(g, n)) {
                    (Some(a), Some(b)) => Some(SparseMatrix::block(
                        a,
                        &SparseMatrix::zeros(a.nrows(), b.ncols()),
                        &SparseMatrix::zeros(b.nrows(), a.ncols()),
                        b,
                    )),
                    _ => None,
                })
                .collect();
            actions.insert(g, v);
        }
        TruncatedModule::from_parts(self.top.clone(), dims, actions, self.truncated || other.truncated)
    }

    pub fn character(&self) -> Character {
        Character::new(self.top.clone(), self.dims.clone())
    }

    /// Graded dual with `(a·φ)(m) = φ(σ(a)·m)`.
    pub fn dualize(&self) -> TruncatedModule {
        let mut actions = BTreeMap::new();
        for g in Generator::ALL {
            let s = g.depth_shift();
            let v = (0..self.dims.len())
                .map(|n| {
                    let t = n as isize + s;
                    if t < 0 || t as usize > self.depth() {
                        None
                    } else {
                        self.matrix(g.sigma(), t as usize).map(SparseMatrix::transpose)
                    }
                })
                .collect();
            actions.insert(g, v);
        }
        TruncatedModule::from_parts(self.top.clone(), self.dims.clone(), actions, self.truncated)
            .expect("dual keeps shapes")
    }

    /// Whether the module satisfies the Cartan condition of `cat` on every depth:
    /// `h − (top(h) − 2n)` vanishes for O and is nilpotent for the thick category.
    pub fn satisfies(&self, cat: CategoryFlag) -> bool {
        (0..self.dims.len()).all(|n| {
            let shifted = self.cartan_shifted(Generator::H, n);
            match cat {
                CategoryFlag::O => shifted.is_zero(),
                CategoryFlag::OTilde => shifted.is_nilpotent(),
            }
        })
    }

    /// Whether `h̄` acts as the scalar `top(h̄)` everywhere (strong weight module).
    pub fn hbar_semisimple(&self) -> bool {
        (0..self.dims.len()).all(|n| self.cartan_shifted(Generator::HBar, n).is_zero())
    }

    /// `h` and `h̄` have the single generalized eigenvalue dictated by the depth.
    pub fn has_expected_spectrum(&self) -> bool {
        (0..self.dims.len()).all(|n| {
            self.cartan_shifted(Generator::H, n).is_nilpotent()
                && self.cartan_shifted(Generator::HBar, n).is_nilpotent()
        })
    }

    /// `ρ(g) − λ(g)` at depth `n` for a Cartan generator `g`.
    pub fn cartan_shifted(&self, g: Generator, n: usize) -> SparseMatrix {
        let w = self.weight_at(n);
        let c = match g {
            Generator::H => w.h,
            Generator::HBar => w.hbar,
            _ => panic!("{} is not a Cartan generator", g.name()),
        };
        self.matrix(g, n).expect("Cartan action is always stored").sub(&SparseMatrix::scalar(self.dims[n], &c))
    }

    /// Replaces one stored matrix; used to build deliberately broken modules in tests
    /// and for hand-assembled extensions.
    pub fn with_matrix(&self, g: Generator, n: usize, m: SparseMatrix) -> Result<TruncatedModule> {
        let mut out = self.clone();
        let slot = out.actions[g.index()]
            .get_mut(n)
            .and_then(Option::as_mut)
            .ok_or_else(|| Error::Invalid(format!("{} has no matrix at depth {n}", g.name())))?;
        if (slot.nrows(), slot.ncols()) != (m.nrows(), m.ncols()) {
            return Err(Error::Invalid("replacement matrix has the wrong shape".into()));
        }
        *slot = m;
        Ok(out)
    }
}

/// Evaluates `u · v_λ` inside the Verma module, as a vector at depth `depth`
/// in the basis `f^{depth−j} f̄^j v_λ` (index `j`).
pub fn apply_to_highest_weight(u: &EnvelopingElement, lambda: &Weight, depth: usize) -> SparseVec {
    let mut out = SparseVec::new();
    for (m, c) in u.terms() {
        if m.exponent(Generator::E) > 0 || m.exponent(Generator::EBar) > 0 {
            continue;
        }
        let (i, j) = (m.exponent(Generator::F) as usize, m.exponent(Generator::FBar) as usize);
        if i + j != depth {
            continue;
        }
        let mut x = c.clone();
        for _ in 0..m.exponent(Generator::H) {
            x *= &lambda.h;
        }
        for _ in 0..m.exponent(Generator::HBar) {
            x *= &lambda.hbar;
        }
        out.add_at(j, &x);
    }
    out
}

fn verma_basis_monomial(depth: usize, j: usize) -> PbwMonomial {
    let mut m = PbwMonomial::one();
    m.0[Generator::F.index()] = (depth - j) as u32;
    m.0[Generator::FBar.index()] = j as u32;
    m
}

/// Index of `f^i f̄^j v_λ` in the Verma basis at depth `i + j`.
pub fn verma_index(_i: usize, j: usize) -> usize {
    j
}

/// The Verma module `Δ(λ)` on depths `0..=N`, with basis `f^{n−j} f̄^j v_λ`
/// (ordered by `j`) at depth `n`, so depth 1 has basis `{f v, f̄ v}`.
/// Actions are read off from straightened products.
pub fn verma(lambda: &Weight, depth: usize) -> TruncatedModule {
    let dims: Vec<usize> = (0..=depth).map(|n| n + 1).collect();
    let mut s = Straightener::new();
    let mut actions = BTreeMap::new();
    for g in Generator::ALL {
        let mut per_depth = Vec::with_capacity(depth + 1);
        for n in 0..=depth {
            let t = n as isize + g.depth_shift();
            if t < 0 || t as usize > depth {
                per_depth.push(None);
                continue;
            }
            let t = t as usize;
            let cols: Vec<SparseVec> = (0..=n)
                .map(|j| {
                    let u = s.left_mul(g, &verma_basis_monomial(n, j));
                    apply_to_highest_weight(&u, lambda, t)
                })
                .collect();
            per_depth.push(Some(SparseMatrix::from_columns(t + 1, &cols)));
        }
        actions.insert(g, per_depth);
    }
    TruncatedModule::from_parts(lambda.clone(), dims, actions, true).expect("Verma shapes are consistent")
}

/// Dimensions of `L(λ)` on depths `0..=N`.
pub fn simple_character(lambda: &Weight, depth: usize) -> Vec<usize> {
    if !lambda.is_degenerate() {
        return (0..=depth).map(|n| n + 1).collect();
    }
    match as_nonneg_int(&lambda.h) {
        Some(top) => (0..=depth).map(|n| usize::from(n as u64 <= top)).collect(),
        None => vec![1; depth + 1],
    }
}

/// The simple module `L(λ)` on depths `0..=N`.
///
/// For `λ(h̄) ≠ 0` this is the Verma module. Otherwise the barred generators act
/// by zero and the module is the `sl2` simple of highest weight `λ(h)`: finite
/// dimensional with basis `e v_i = i v_{i−1}`, `f v_i = (n−i) v_{i+1}` when
/// `λ(h) = n ∈ Z≥0`, and the (simple) `sl2` Verma module `v_i = f^i v` otherwise.
pub fn simple_module(lambda: &Weight, depth: usize) -> TruncatedModule {
    if !lambda.is_degenerate() {
        return verma(lambda, depth);
    }
    let dims = simple_character(lambda, depth);
    let top_int = as_nonneg_int(&lambda.h);
    let c = lambda.h.clone();
    let one_by_one = |x: Q| SparseMatrix::from_dense(&[vec![x]]);
    let mut actions = BTreeMap::new();
    for g in Generator::ALL {
        let mut per_depth = Vec::with_capacity(depth + 1);
        for n in 0..=depth {
            let t = n as isize + g.depth_shift();
            if t < 0 || t as usize > depth {
                per_depth.push(None);
                continue;
            }
            let (rows, cols) = (dims[t as usize], dims[n]);
            if rows == 0 || cols == 0 || g.bar_degree() == 1 {
                per_depth.push(Some(SparseMatrix::zeros(rows, cols)));
                continue;
            }
            let i = q(n as i64);
            let x = match (g, &top_int) {
                (Generator::H, _) => &c - q(2) * &i,
                (Generator::E, Some(_)) => i,
                (Generator::F, Some(top)) => q(*top as i64) - i,
                (Generator::E, None) => &i * (&c - &i + Q::one()),
                (Generator::F, None) => Q::one(),
                _ => unreachable!("barred generators handled above"),
            };
            per_depth.push(Some(one_by_one(x)));
        }
        actions.insert(g, per_depth);
    }
    let truncated = match top_int {
        Some(top) => top > depth as u64,
        None => true,
    };
    TruncatedModule::from_parts(lambda.clone(), dims, actions, truncated).expect("simple module shapes are consistent")
}

/// A graded dimension vector below a fixed top weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    top: Weight,
    dims: Vec<usize>,
    truncation_depth: usize,
}

impl Character {
    pub fn new(top: Weight, dims: Vec<usize>) -> Self {
        let truncation_depth = dims.len().saturating_sub(1);
        let mut dims = dims;
        while dims.last() == Some(&0) {
            dims.pop();
        }
        Self { top, dims, truncation_depth }
    }

    pub fn top(&self) -> &Weight {
        &self.top
    }

    pub fn truncation_depth(&self) -> usize {
        self.truncation_depth
    }

    pub fn get(&self, n: usize) -> usize {
        self.dims.get(n).copied().unwrap_or(0)
    }

    /// Dimensions up to the last nonzero depth.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Dimensions on every depth `0..=N`, zeros included.
    pub fn padded(&self) -> Vec<usize> {
        (0..=self.truncation_depth).map(|n| self.get(n)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    fn compatible(&self, other: &Character) -> Result<()> {
        if self.top != other.top || self.truncation_depth != other.truncation_depth {
            return Err(Error::Invalid("characters have different top weight or truncation".into()));
        }
        Ok(())
    }

    pub fn plus(&self, other: &Character) -> Result<Character> {
        self.compatible(other)?;
        let dims = (0..=self.truncation_depth).map(|n| self.get(n) + other.get(n)).collect();
        Ok(Character::new(self.top.clone(), dims))
    }

    pub fn minus(&self, other: &Character) -> Result<Character> {
        self.compatible(other)?;
        let dims = (0..=self.truncation_depth)
            .map(|n| self.get(n).checked_sub(other.get(n)).ok_or(Error::NegativeResidual { depth: n }))
            .collect::<Result<Vec<_>>>()?;
        Ok(Character::new(self.top.clone(), dims))
    }
}

#[derive(Serialize, Deserialize)]
struct CharacterJson {
    top: Weight,
    dims: BTreeMap<usize, usize>,
    truncation_depth: usize,
}

impl Serialize for Character {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CharacterJson {
            top: self.top.clone(),
            dims: self.dims.iter().copied().enumerate().collect(),
            truncation_depth: self.truncation_depth,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Character {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = CharacterJson::deserialize(d)?;
        let mut dims = vec![0; raw.truncation_depth + 1];
        for (n, x) in raw.dims {
            if n > raw.truncation_depth {
                return Err(serde::de::Error::custom("character depth beyond truncation"));
            }
            dims[n] = x;
        }
        Ok(Character::new(raw.top, dims))
    }
}

/// Outcome of checking `ρ(x)ρ(y) − ρ(y)ρ(x) = ρ([x,y])` depth by depth.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub checked: usize,
    pub boundary_skipped: usize,
    pub violations: Vec<Violation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub x: &'static str,
    pub y: &'static str,
    pub depth: usize,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violates(&self, x: Generator, y: Generator) -> bool {
        self.violations.iter().any(|v| (v.x, v.y) == (x.name(), y.name()) || (v.x, v.y) == (y.name(), x.name()))
    }
}

pub fn check_relations(m: &TruncatedModule) -> RelationReport {
    let mut report = RelationReport::default();
    for (a, &x) in Generator::ALL.iter().enumerate() {
        for &y in &Generator::ALL[a + 1..] {
            let rhs = bracket_generators(x, y);
            for n in 0..=m.depth() {
                let xy = m.act_word(&[x, y], n);
                let yx = m.act_word(&[y, x], n);
                let (Some((t, xy)), Some((_, yx))) = (xy, yx) else {
                    report.boundary_skipped += 1;
                    continue;
                };
                let mut rho = Some(SparseMatrix::zeros(m.dim_at(t), m.dims()[n]));
                for (g, c) in rhs.terms() {
                    rho = match (rho, m.act_word(&[g], n)) {
                        (Some(acc), Some((_, mg))) => Some(acc.add_scaled(c, &mg)),
                        _ => None,
                    };
                }
                let Some(rho) = rho else {
                    report.boundary_skipped += 1;
                    continue;
                };
                report.checked += 1;
                if xy.sub(&yx) != rho {
                    report.violations.push(Violation { x: x.name(), y: y.name(), depth: n });
                }
            }
        }
    }
    report
}

/// A family of maps `T_n : M_n → N_n`.
pub type GradedMap = Vec<SparseMatrix>;

/// Basis of the graded module maps `M → N` on the common window.
pub fn intertwiners(m: &TruncatedModule, n: &TruncatedModule) -> Result<Vec<GradedMap>> {
    if m.depth() != n.depth() || m.top() != n.top() {
        return Err(Error::Invalid("intertwiners need matching top weight and depth".into()));
    }
    // unknown (d, r, c) ↦ index
    let mut offsets = Vec::with_capacity(m.depth() + 1);
    let mut total = 0;
    for d in 0..=m.depth() {
        offsets.push(total);
        total += n.dims()[d] * m.dims()[d];
    }
    let var = |d: usize, r: usize, c: usize| offsets[d] + r * m.dims()[d] + c;
    let mut eqs = Echelon::new(total);
    for g in Generator::ALL {
        for d in 0..=m.depth() {
            let t = d as isize + g.depth_shift();
            if t < 0 || t as usize > m.depth() {
                continue;
            }
            let t = t as usize;
            let (Some(rm), Some(rn)) = (m.matrix(g, d), n.matrix(g, d)) else { continue };
            // ρ_N(g) T_d − T_t ρ_M(g) = 0, entry (r, c) with r in N_t, c in M_d
            for r in 0..n.dims()[t] {
                for c in 0..m.dims()[d] {
                    let mut row = SparseVec::new();
                    for k in 0..n.dims()[d] {
                        row.add_at(var(d, k, c), &rn.get(r, k));
                    }
                    for k in 0..m.dims()[t] {
                        row.add_at(var(t, r, k), &-rm.get(k, c));
                    }
                    eqs.insert(row);
                }
            }
        }
    }
    Ok(eqs
        .null_space()
        .into_iter()
        .map(|v| {
            (0..=m.depth())
                .map(|d| {
                    let mut t = SparseMatrix::zeros(n.dims()[d], m.dims()[d]);
                    for r in 0..n.dims()[d] {
                        for c in 0..m.dims()[d] {
                            t.set(r, c, v.get(var(d, r, c)));
                        }
                    }
                    t
                })
                .collect()
        })
        .collect())
}

/// An invertible intertwiner `M → N`, if one is found among the basis and a few
/// fixed combinations of it.
pub fn isomorphism(m: &TruncatedModule, n: &TruncatedModule) -> Result<Option<GradedMap>> {
    if m.dims() != n.dims() {
        return Ok(None);
    }
    let basis = intertwiners(m, n)?;
    let invertible = |t: &GradedMap| t.iter().all(|b| b.nrows() == b.ncols() && b.rank() == b.nrows());
    let mut candidates: Vec<GradedMap> = basis.clone();
    for base in 2..6i64 {
        let mut power = Q::one();
        let mut acc: Option<GradedMap> = None;
        for b in &basis {
            acc = Some(match acc {
                None => b.iter().map(|x| x.scaled(&power)).collect(),
                Some(a) => a.iter().zip(b).map(|(x, y)| x.add_scaled(&power, y)).collect(),
            });
            power *= q(base);
        }
        candidates.extend(acc);
    }
    Ok(candidates.into_iter().find(invertible))
}

#[derive(Serialize, Deserialize)]
struct ActionJson {
    from_depth: usize,
    entries: Vec<(usize, usize, String)>,
}

#[derive(Serialize, Deserialize)]
struct ModuleJson {
    top: Weight,
    depth: usize,
    dims: Vec<usize>,
    actions: BTreeMap<String, Vec<ActionJson>>,
    #[serde(default = "default_truncated")]
    truncated: bool,
}

fn default_truncated() -> bool {
    true
}

impl Serialize for TruncatedModule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut actions = BTreeMap::new();
        for g in Generator::ALL {
            let list: Vec<ActionJson> = (0..self.dims.len())
                .filter_map(|n| {
                    self.matrix(g, n).map(|m| ActionJson {
                        from_depth: n,
                        entries: m.entries().map(|(r, c, x)| (r, c, fmt_q(x))).collect(),
                    })
                })
                .collect();
            actions.insert(g.name().to_string(), list);
        }
        ModuleJson {
            top: self.top.clone(),
            depth: self.depth(),
            dims: self.dims.clone(),
            actions,
            truncated: self.truncated,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TruncatedModule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = ModuleJson::deserialize(d)?;
        if raw.dims.len() != raw.depth + 1 {
            return Err(D::Error::custom("dims length must be depth + 1"));
        }
        let mut actions = BTreeMap::new();
        for (name, list) in raw.actions {
            let g: Generator = name.parse().map_err(D::Error::custom)?;
            let mut per_depth: Vec<Option<SparseMatrix>> = vec![None; raw.depth + 1];
            for a in list {
                let t = a.from_depth as isize + g.depth_shift();
                if a.from_depth > raw.depth || t < 0 || t as usize > raw.depth {
                    return Err(D::Error::custom(format!("{name}: depth {} out of range", a.from_depth)));
                }
                let mut m = SparseMatrix::zeros(raw.dims[t as usize], raw.dims[a.from_depth]);
                for (r, c, x) in a.entries {
                    if r >= m.nrows() || c >= m.ncols() {
                        return Err(D::Error::custom(format!("{name}: entry ({r},{c}) out of range")));
                    }
                    m.set(r, c, parse_q(&x).map_err(D::Error::custom)?);
                }
                per_depth[a.from_depth] = Some(m);
            }
            actions.insert(g, per_depth);
        }
        TruncatedModule::from_parts(raw.top, raw.dims, actions, raw.truncated).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q_frac;
    use Generator::*;

    /// Closed-form Verma action on `v_{i,j} = f^i f̄^j v`, derived by hand from the
    /// bracket relations. Used only to cross-check the straightening route.
    fn verma_closed_form(lambda: &Weight, g: Generator, i: usize, j: usize) -> Vec<(usize, usize, Q)> {
        let (a, b) = (lambda.h.clone(), lambda.hbar.clone());
        let (qi, qj) = (q(i as i64), q(j as i64));
        let mut out = Vec::new();
        match g {
            F => out.push((i + 1, j, Q::one())),
            FBar => out.push((i, j + 1, Q::one())),
            H => out.push((i, j, &a - q(2) * (&qi + &qj))),
            HBar => {
                out.push((i, j, b.clone()));
                if i >= 1 {
                    out.push((i - 1, j + 1, q(-2) * &qi));
                }
            }
            EBar => {
                if i >= 1 {
                    out.push((i - 1, j, &qi * &b));
                }
                if i >= 2 {
                    out.push((i - 2, j + 1, -(&qi * (&qi - Q::one()))));
                }
            }
            E => {
                if j >= 1 {
                    out.push((i, j - 1, &qj * &b));
                }
                if i >= 1 {
                    out.push((i - 1, j, &qi * (&a - q(2) * &qj - &qi + Q::one())));
                }
            }
        }
        out
    }

    #[test]
    fn verma_matches_closed_form() {
        for lambda in [Weight::new(q_frac(1, 2), q(0)), Weight::new(q(3), q_frac(-2, 3)), Weight::ints(0, 0)] {
            let m = verma(&lambda, 6);
            for g in Generator::ALL {
                for n in 0..=6usize {
                    let Some(mat) = m.matrix(g, n) else { continue };
                    let t = (n as isize + g.depth_shift()) as usize;
                    let mut want = SparseMatrix::zeros(t + 1, n + 1);
                    for i in 0..=n {
                        for (i2, j2, c) in verma_closed_form(&lambda, g, i, n - i) {
                            assert_eq!(i2 + j2, t);
                            want.add_at(verma_index(i2, j2), verma_index(i, n - i), &c);
                        }
                    }
                    assert_eq!(mat, &want, "{} at depth {n} for {lambda}", g.name());
                }
            }
        }
    }

    #[test]
    fn verma_dims() {
        assert_eq!(verma(&Weight::ints(1, 1), 5).dims(), &[1, 2, 3, 4, 5, 6]);
        assert!(depth_from_i64(-1).is_err());
    }

    #[test]
    fn hbar_matrix_at_depth_one() {
        let lambda = Weight::new(q_frac(5, 3), q(7));
        let m = verma(&lambda, 1);
        let want = SparseMatrix::from_dense(&[vec![q(7), q(0)], vec![q(-2), q(7)]]);
        assert_eq!(m.matrix(HBar, 1).unwrap(), &want);
    }

    #[test]
    fn e_on_fbar_power() {
        let lambda = Weight::new(q_frac(1, 3), q_frac(5, 2));
        let m = verma(&lambda, 6);
        for n in 1..=6usize {
            let col = m.matrix(E, n).unwrap().column(verma_index(0, n));
            let mut want = SparseVec::new();
            want.set(verma_index(0, n - 1), q(n as i64) * &lambda.hbar);
            assert_eq!(col, want);
        }
    }

    #[test]
    fn relations_hold_on_verma() {
        let r = check_relations(&verma(&Weight::new(q_frac(-3, 4), q(2)), 8));
        assert!(r.passed(), "{:?}", r.violations);
        assert!(r.checked > 0 && r.boundary_skipped > 0);
    }

    #[test]
    fn broken_hbar_is_detected() {
        let m = verma(&Weight::ints(4, 0), 4);
        let mut hbar = m.matrix(HBar, 1).unwrap().clone();
        assert_eq!(hbar.get(1, 0), q(-2));
        hbar.set(1, 0, q(0));
        let broken = m.with_matrix(HBar, 1, hbar).unwrap();
        let r = check_relations(&broken);
        assert!(r.violates(EBar, F), "{:?}", r.violations);
    }

    #[test]
    fn empty_module_passes() {
        let r = check_relations(&TruncatedModule::zero(Weight::ints(0, 0), 3));
        assert!(r.passed());
    }

    #[test]
    fn simple_modules() {
        let l3 = simple_module(&Weight::ints(3, 0), 10);
        assert_eq!(l3.character().dims(), &[1, 1, 1, 1]);
        assert!(!l3.is_truncated());
        assert!(check_relations(&l3).passed());
        assert_eq!(check_relations(&l3).boundary_skipped, 0);
        let half = simple_module(&Weight::new(q_frac(1, 2), q(0)), 4);
        assert_eq!(half.dims(), &[1, 1, 1, 1, 1]);
        assert!(check_relations(&half).passed());
        let nondeg = Weight::ints(2, 5);
        assert_eq!(simple_module(&nondeg, 4), verma(&nondeg, 4));
        assert!(simple_module(&Weight::ints(6, 0), 3).is_truncated());
    }

    #[test]
    fn characters() {
        let lambda = Weight::ints(2, 1);
        let ch = verma(&lambda, 3).character();
        assert_eq!(ch.dims(), &[1, 2, 3, 4]);
        let m = simple_module(&Weight::ints(2, 0), 3);
        let top = Weight::ints(2, 0);
        let sum = verma(&top, 3).direct_sum(&m).unwrap();
        assert_eq!(sum.character(), verma(&top, 3).character().plus(&m.character()).unwrap());
        assert!(TruncatedModule::zero(top, 4).character().is_zero());
    }

    #[test]
    fn casimir_scalar_on_nondegenerate_verma() {
        let lambda = Weight::new(q_frac(3, 2), q(-2));
        let c = crate::algebra::casimir();
        let m = verma(&lambda, 4);
        let expect = &lambda.hbar * (&lambda.h + q(2));
        for n in 0..=2 {
            let mat = m.act_element(&c, n).unwrap();
            assert_eq!(mat, SparseMatrix::scalar(n + 1, &expect), "depth {n}");
        }
    }

    #[test]
    fn verma_in_o_but_not_strong() {
        let m = verma(&Weight::new(q_frac(1, 5), q(0)), 3);
        assert!(m.satisfies(CategoryFlag::O));
        assert!(m.satisfies(CategoryFlag::OTilde));
        assert!(!m.hbar_semisimple());
        assert!(verma(&Weight::ints(1, 0), 0).hbar_semisimple());
    }

    #[test]
    fn fbar_v_is_killed_by_raising_when_degenerate() {
        let m = verma(&Weight::new(q_frac(7, 3), q(0)), 3);
        let w = SparseVec::unit(verma_index(0, 1));
        assert!(m.act_vec(E, 1, &w).unwrap().is_zero());
        assert!(m.act_vec(EBar, 1, &w).unwrap().is_zero());
    }

    #[test]
    fn truncation_coherence() {
        let lambda = Weight::new(q_frac(-1, 2), q(3));
        assert_eq!(verma(&lambda, 7).restrict(4), verma(&lambda, 4));
    }

    #[test]
    fn duality() {
        let m = verma(&Weight::new(q(2), q_frac(1, 2)), 4);
        let d = m.dualize();
        assert_eq!(d.character(), m.character());
        assert_eq!(d.dualize(), m);
        assert!(check_relations(&d).passed());
        for lambda in [Weight::ints(3, 0), Weight::new(q_frac(1, 2), q(0)), Weight::ints(1, 2)] {
            let l = simple_module(&lambda, 4);
            assert!(isomorphism(&l, &l.dualize()).unwrap().is_some(), "{lambda}");
        }
    }

    #[test]
    fn non_isomorphic_modules() {
        let lambda = Weight::ints(0, 0);
        let a = verma(&lambda, 2);
        let b = simple_module(&lambda, 2).direct_sum(&verma(&lambda, 2)).unwrap();
        assert!(isomorphism(&a, &b).unwrap().is_none());
    }

    #[test]
    fn json_round_trip() {
        let m = verma(&Weight::new(q_frac(1, 2), q(-1)), 3);
        let s = serde_json::to_string(&m).unwrap();
        let back: TruncatedModule = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        let ch = m.character();
        let back: Character = serde_json::from_str(&serde_json::to_string(&ch).unwrap()).unwrap();
        assert_eq!(back, ch);
    }
}
