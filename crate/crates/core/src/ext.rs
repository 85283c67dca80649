//! Blocks, central characters, and first extension groups between simple modules.
//!
//! `Ext¹(L(λ), L(μ))` is computed as graded Lie algebra cohomology `H¹(g, Hom(L(λ), L(μ)))`
//! restricted to weight-homogeneous cochains, on a common depth window. Cochain
//! equations whose composites leave the window are dropped.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{bracket_generators, Generator};
use crate::error::{Error, Result};
use crate::linalg::{Echelon, RowEchelon, SparseMatrix, SparseVec};
use crate::module::{simple_module, CategoryFlag, TruncatedModule};
use crate::rational::{fmt_q, parse_q, q, Q};
use crate::weight::Weight;

/// Extra depths beyond the weight offset required by [`ext1`].
pub const EXT_MARGIN: usize = 4;
pub const DEFAULT_DEPTH_CAP: usize = 40;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BlockId {
    Nondegenerate { weight: Weight },
    Coset { representative: Weight },
}

impl BlockId {
    /// Weight from which offsets are measured.
    pub fn anchor(&self) -> &Weight {
        match self {
            BlockId::Nondegenerate { weight } => weight,
            BlockId::Coset { representative } => representative,
        }
    }

    pub fn contains(&self, w: &Weight) -> bool {
        &block_of(w) == self
    }
}

pub fn block_of(lambda: &Weight) -> BlockId {
    if !lambda.is_degenerate() {
        return BlockId::Nondegenerate { weight: lambda.clone() };
    }
    let two = q(2);
    let k = (&lambda.h / &two).floor();
    BlockId::Coset { representative: Weight::new(&lambda.h - &two * k, Q::zero()) }
}

/// Scalar by which the Casimir element acts on a highest weight module of weight `λ`.
pub fn casimir_scalar(lambda: &Weight) -> Q {
    &lambda.hbar * (&lambda.h + q(2))
}

/// A 1-cochain: for each generator, the component maps out of each depth of the source.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Cocycle {
    pub maps: BTreeMap<Generator, BTreeMap<usize, SparseMatrix>>,
}

impl Cocycle {
    pub fn get(&self, g: Generator, depth: usize) -> Option<&SparseMatrix> {
        self.maps.get(&g).and_then(|m| m.get(&depth))
    }

    pub fn is_zero(&self) -> bool {
        self.maps.values().all(|m| m.values().all(SparseMatrix::is_zero))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtResult {
    pub lambda: Weight,
    pub mu: Weight,
    pub category: CategoryFlag,
    pub dimension: usize,
    pub cocycle_basis: Vec<Cocycle>,
    pub depths_checked: Vec<usize>,
    /// Dimension found at each entry of `depths_checked`.
    pub dims_by_depth: Vec<usize>,
    pub stabilized: bool,
}

/// Placement of source and target simples in a common window of positions `0..=N`.
#[derive(Clone, Debug)]
pub struct ExtSetup {
    pub lambda: Weight,
    pub mu: Weight,
    pub window: usize,
    /// Position of the top of `L(λ)`.
    pub source_offset: usize,
    /// Position of the top of `L(μ)`.
    pub target_offset: usize,
    pub source: TruncatedModule,
    pub target: TruncatedModule,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Slot {
    Zero,
    OutOfWindow,
    Block(usize),
}

impl ExtSetup {
    /// `None` when the weights lie in different cosets.
    pub fn new(lambda: &Weight, mu: &Weight, window: usize) -> Result<Option<Self>> {
        let Some(k) = lambda.steps_to(mu) else { return Ok(None) };
        let needed = k.unsigned_abs() as usize + EXT_MARGIN;
        if window < needed {
            return Err(Error::WindowTooSmall { needed, got: window });
        }
        let source_offset = (-k).max(0) as usize;
        let target_offset = (source_offset as i64 + k) as usize;
        Ok(Some(Self {
            lambda: lambda.clone(),
            mu: mu.clone(),
            window,
            source_offset,
            target_offset,
            source: simple_module(lambda, window - source_offset),
            target: simple_module(mu, window - target_offset),
        }))
    }

    fn source_pos(&self, i: usize) -> isize {
        (i + self.source_offset) as isize
    }

    /// Where `φ(g)` sends source depth `i`.
    fn slot(&self, g: Generator, i: usize) -> Slot {
        let p = self.source_pos(i) + g.depth_shift();
        if p < 0 {
            return Slot::Zero;
        }
        if p as usize > self.window {
            return if self.target.is_truncated() { Slot::OutOfWindow } else { Slot::Zero };
        }
        let j = p - self.target_offset as isize;
        if j < 0 || self.target.dims()[j as usize] == 0 || self.source.dims()[i] == 0 {
            return Slot::Zero;
        }
        Slot::Block(j as usize)
    }
}

/// Index of every cochain unknown `φ(g)_{i}[r, c]`.
struct Unknowns {
    offsets: BTreeMap<(Generator, usize), (usize, usize, usize)>,
    count: usize,
}

impl Unknowns {
    fn new(s: &ExtSetup) -> Self {
        let mut offsets = BTreeMap::new();
        let mut count = 0;
        // depth-major order keeps the equations banded
        for i in 0..=s.source.depth() {
            for g in Generator::ALL {
                if let Slot::Block(j) = s.slot(g, i) {
                    let (rows, cols) = (s.target.dims()[j], s.source.dims()[i]);
                    offsets.insert((g, i), (count, rows, cols));
                    count += rows * cols;
                }
            }
        }
        Self { offsets, count }
    }

    fn var(&self, g: Generator, i: usize, r: usize, c: usize) -> usize {
        let (off, _, cols) = self.offsets[&(g, i)];
        off + r * cols + c
    }

    fn decode(&self, v: &SparseVec) -> Cocycle {
        let mut out = Cocycle::default();
        for (&(g, i), &(off, rows, cols)) in &self.offsets {
            let mut m = SparseMatrix::zeros(rows, cols);
            for r in 0..rows {
                for c in 0..cols {
                    m.set(r, c, v.get(off + r * cols + c));
                }
            }
            out.maps.entry(g).or_default().insert(i, m);
        }
        out
    }

    fn encode(&self, c: &Cocycle) -> SparseVec {
        let mut v = SparseVec::new();
        for (&(g, i), &(off, rows, cols)) in &self.offsets {
            if let Some(m) = c.get(g, i) {
                for r in 0..rows {
                    for col in 0..cols {
                        v.set(off + r * cols + col, m.get(r, col));
                    }
                }
            }
        }
        v
    }
}

/// Linear forms in the unknowns for each entry of a `rows × cols` matrix.
struct FormMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<SparseVec>,
}

impl FormMatrix {
    fn new(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![SparseVec::new(); rows * cols] }
    }

    fn add(&mut self, r: usize, c: usize, var: usize, x: &Q) {
        self.entries[r * self.cols + c].add_at(var, x);
    }
}

/// Accumulates `coef · ρ_W(a) φ(b)` at source depth `i`; `false` if it leaves the window.
fn add_rho_phi(
    s: &ExtSetup,
    u: &Unknowns,
    out: &mut FormMatrix,
    coef: &Q,
    a: Generator,
    b: Generator,
    i: usize,
) -> bool {
    match s.slot(b, i) {
        Slot::OutOfWindow => false,
        Slot::Zero => true,
        Slot::Block(j) => {
            let Some(ra) = s.target.act(a, j) else { return false };
            for (r, m, x) in ra.entries() {
                let x = coef * x;
                for c in 0..out.cols {
                    out.add(r, c, u.var(b, i, m, c), &x);
                }
            }
            true
        }
    }
}

/// Accumulates `coef · φ(b) ρ_V(a)` at source depth `i`.
fn add_phi_rho(
    s: &ExtSetup,
    u: &Unknowns,
    out: &mut FormMatrix,
    coef: &Q,
    b: Generator,
    a: Generator,
    i: usize,
) -> bool {
    let i2 = i as isize + a.depth_shift();
    if i2 < 0 {
        return true;
    }
    let Some(ra) = s.source.act(a, i) else { return false };
    if i2 as usize > s.source.depth() {
        return true;
    }
    let i2 = i2 as usize;
    match s.slot(b, i2) {
        Slot::OutOfWindow => false,
        Slot::Zero => true,
        Slot::Block(_) => {
            for (m, c, x) in ra.entries() {
                let x = coef * x;
                for r in 0..out.rows {
                    out.add(r, c, u.var(b, i2, r, m), &x);
                }
            }
            true
        }
    }
}

fn target_rows(s: &ExtSetup, i: usize, shift: isize) -> usize {
    let p = s.source_pos(i) + shift - s.target_offset as isize;
    if p < 0 {
        0
    } else {
        s.target.dim_at(p)
    }
}

/// Cocycle equations together with the category constraint, as rows over the unknowns.
fn cocycle_equations(s: &ExtSetup, u: &Unknowns, cat: CategoryFlag) -> Echelon {
    let mut all: Vec<SparseVec> = Vec::new();
    let one = Q::one();
    let minus = -Q::one();
    for (ai, &a) in Generator::ALL.iter().enumerate() {
        for &b in &Generator::ALL[ai + 1..] {
            let bracket = bracket_generators(a, b);
            for i in 0..=s.source.depth() {
                let cols = s.source.dims()[i];
                let rows = target_rows(s, i, a.depth_shift() + b.depth_shift());
                if cols == 0 || rows == 0 {
                    continue;
                }
                // φ([a,b]) − ρ(a)φ(b) + φ(b)ρ(a) − φ(a)ρ(b) + ρ(b)φ(a) = 0
                let mut form = FormMatrix::new(rows, cols);
                let mut ok = add_rho_phi(s, u, &mut form, &minus, a, b, i)
                    && add_phi_rho(s, u, &mut form, &one, b, a, i)
                    && add_phi_rho(s, u, &mut form, &minus, a, b, i)
                    && add_rho_phi(s, u, &mut form, &one, b, a, i);
                for (g, c) in bracket.terms() {
                    match s.slot(g, i) {
                        Slot::OutOfWindow => ok = false,
                        Slot::Zero => {}
                        Slot::Block(_) => {
                            for r in 0..rows {
                                for col in 0..cols {
                                    form.add(r, col, u.var(g, i, r, col), c);
                                }
                            }
                        }
                    }
                }
                if !ok {
                    continue;
                }
                all.extend(form.entries.into_iter().filter(|r| !r.is_zero()));
            }
        }
    }
    if cat == CategoryFlag::O {
        // every component of φ(h) joins equal h-eigenvalues
        for (&(g, i), &(_, rows, cols)) in &u.offsets {
            if g == Generator::H {
                for r in 0..rows {
                    for c in 0..cols {
                        all.push(SparseVec::unit(u.var(g, i, r, c)));
                    }
                }
            }
        }
    }
    // sparse rows first limits fill-in
    all.sort_by_key(SparseVec::nnz);
    let mut eqs = RowEchelon::new(u.count);
    for row in all {
        eqs.insert(row);
    }
    eqs.into_reduced()
}

/// Images `dψ` of the elementary weight-preserving maps `ψ`.
fn coboundaries(s: &ExtSetup, u: &Unknowns) -> Vec<SparseVec> {
    let mut out = Vec::new();
    for i in 0..=s.source.depth() {
        let Slot::Block(j) = s.slot(Generator::H, i) else { continue };
        for r in 0..s.target.dims()[j] {
            for c in 0..s.source.dims()[i] {
                let mut v = SparseVec::new();
                for g in Generator::ALL {
                    // ρ_W(g) ψ
                    if let Slot::Block(jt) = s.slot(g, i) {
                        let rw = s.target.act(g, j).expect("block target lies in the window");
                        for rr in 0..s.target.dims()[jt] {
                            v.add_at(u.var(g, i, rr, c), &rw.get(rr, r));
                        }
                    }
                    // − ψ ρ_V(g), from the depth that g maps onto i
                    let ip = i as isize - g.depth_shift();
                    if ip < 0 || ip as usize > s.source.depth() {
                        continue;
                    }
                    let ip = ip as usize;
                    if let (Slot::Block(_), Some(rv)) = (s.slot(g, ip), s.source.matrix(g, ip)) {
                        for cc in 0..s.source.dims()[ip] {
                            v.add_at(u.var(g, ip, r, cc), &-rv.get(c, cc));
                        }
                    }
                }
                out.push(v);
            }
        }
    }
    out
}

/// Result of the cochain computation at one fixed window.
#[derive(Clone, Debug)]
pub struct WindowExt {
    pub dimension: usize,
    pub cocycles: usize,
    pub coboundaries: usize,
    pub representatives: Vec<Cocycle>,
}

pub fn ext1_in(setup: &ExtSetup, cat: CategoryFlag) -> WindowExt {
    let u = Unknowns::new(setup);
    let eqs = cocycle_equations(setup, &u, cat);
    let z = eqs.null_space();
    let mut span = RowEchelon::new(u.count);
    for b in coboundaries(setup, &u) {
        span.insert(b);
    }
    let b_rank = span.rank();
    let mut representatives = Vec::new();
    for v in &z {
        if span.insert(v.clone()) {
            representatives.push(u.decode(v));
        }
    }
    WindowExt { dimension: z.len() - b_rank, cocycles: z.len(), coboundaries: b_rank, representatives }
}

/// `Ext¹(L(λ), L(μ))` at a single window depth.
pub fn ext1(lambda: &Weight, mu: &Weight, cat: CategoryFlag, depth: usize) -> Result<ExtResult> {
    let base = ExtResult {
        lambda: lambda.clone(),
        mu: mu.clone(),
        category: cat,
        dimension: 0,
        cocycle_basis: Vec::new(),
        depths_checked: vec![depth],
        dims_by_depth: vec![0],
        stabilized: false,
    };
    let Some(setup) = ExtSetup::new(lambda, mu, depth)? else {
        return Ok(base);
    };
    let w = ext1_in(&setup, cat);
    Ok(ExtResult { dimension: w.dimension, cocycle_basis: w.representatives, dims_by_depth: vec![w.dimension], ..base })
}

/// Minimal window accepted by [`ext1`] for the pair.
pub fn minimal_window(lambda: &Weight, mu: &Weight) -> usize {
    lambda.steps_to(mu).map_or(0, |k| k.unsigned_abs() as usize) + EXT_MARGIN
}

/// Runs [`ext1`] on three consecutive windows, moving up until they agree or `cap` is exceeded.
pub fn stabilize_ext(lambda: &Weight, mu: &Weight, cat: CategoryFlag, cap: usize) -> Result<ExtResult> {
    let start = minimal_window(lambda, mu);
    if lambda.steps_to(mu).is_none() {
        return Ok(ExtResult {
            lambda: lambda.clone(),
            mu: mu.clone(),
            category: cat,
            dimension: 0,
            cocycle_basis: Vec::new(),
            depths_checked: vec![start, start + 1, start + 2],
            dims_by_depth: vec![0, 0, 0],
            stabilized: true,
        });
    }
    let mut runs: Vec<ExtResult> = Vec::new();
    let mut n = start;
    loop {
        if n > cap {
            return Err(Error::NotStabilized { cap, dims: runs.iter().map(|r| r.dimension).collect() });
        }
        runs.push(ext1(lambda, mu, cat, n)?);
        if runs.len() >= 3 {
            let last = &runs[runs.len() - 3..];
            if last.iter().all(|r| r.dimension == last[0].dimension) {
                let depths = last.iter().map(|r| r.depths_checked[0]).collect();
                let dims = last.iter().map(|r| r.dimension).collect();
                let mut out = runs.pop().expect("nonempty");
                out.depths_checked = depths;
                out.dims_by_depth = dims;
                out.stabilized = true;
                return Ok(out);
            }
        }
        n += 1;
    }
}

/// The length-two module `0 → L(μ) → M → L(λ) → 0` defined by a cocycle,
/// on the common window of `setup` (target block first).
pub fn extension_module(setup: &ExtSetup, cocycle: &Cocycle) -> Result<TruncatedModule> {
    let n = setup.window;
    let top = setup.lambda.lowered(-(setup.source_offset as i64));
    let w_depth = |p: usize| p.checked_sub(setup.target_offset).filter(|&j| j <= setup.target.depth());
    let v_depth = |p: usize| p.checked_sub(setup.source_offset).filter(|&i| i <= setup.source.depth());
    let wd = |p: usize| w_depth(p).map_or(0, |j| setup.target.dims()[j]);
    let vd = |p: usize| v_depth(p).map_or(0, |i| setup.source.dims()[i]);
    let dims: Vec<usize> = (0..=n).map(|p| wd(p) + vd(p)).collect();
    let mut actions = BTreeMap::new();
    for g in Generator::ALL {
        let mut per_depth = Vec::with_capacity(n + 1);
        for p in 0..=n {
            let t = p as isize + g.depth_shift();
            if t < 0 || t as usize > n {
                per_depth.push(None);
                continue;
            }
            let t = t as usize;
            let block = |m: Option<&SparseMatrix>, rows: usize, cols: usize| {
                m.filter(|m| m.nrows() == rows && m.ncols() == cols)
                    .cloned()
                    .unwrap_or_else(|| SparseMatrix::zeros(rows, cols))
            };
            let ww = block(w_depth(p).and_then(|j| setup.target.matrix(g, j)), wd(t), wd(p));
            let vv = block(v_depth(p).and_then(|i| setup.source.matrix(g, i)), vd(t), vd(p));
            let phi = block(v_depth(p).and_then(|i| cocycle.get(g, i)), wd(t), vd(p));
            per_depth.push(Some(SparseMatrix::block(&ww, &phi, &SparseMatrix::zeros(vd(t), wd(p)), &vv)));
        }
        actions.insert(g, per_depth);
    }
    let truncated = setup.source.is_truncated() || setup.target.is_truncated();
    TruncatedModule::from_parts(top, dims, actions, truncated)
}

/// Whether a cochain is `dψ` for a weight-preserving `ψ`, i.e. the extension splits.
pub fn is_coboundary(setup: &ExtSetup, cocycle: &Cocycle) -> bool {
    let u = Unknowns::new(setup);
    let mut span = RowEchelon::new(u.count);
    for b in coboundaries(setup, &u) {
        span.insert(b);
    }
    span.contains(&u.encode(cocycle))
}

/// The self-extension of `L(n, 0)` in which barred generators map the sub copy
/// onto the quotient copy by the unbarred action.
pub fn takiff_self_extension(n: u64, window: usize) -> Result<(ExtSetup, Cocycle)> {
    let lambda = Weight::ints(n as i64, 0);
    let setup = ExtSetup::new(&lambda, &lambda, window)?.expect("same weight");
    let mut c = Cocycle::default();
    for g in [Generator::EBar, Generator::FBar, Generator::HBar] {
        let base = g.unbarred();
        for i in 0..=setup.source.depth() {
            if let Slot::Block(_) = setup.slot(g, i) {
                let m = setup.source.matrix(base, i).expect("present").clone();
                c.maps.entry(g).or_default().insert(i, m);
            }
        }
    }
    Ok((setup, c))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    pub block: BlockId,
    pub category: CategoryFlag,
    pub vertices: Vec<Weight>,
    pub arrows: BTreeMap<(usize, usize), usize>,
}

/// `λ`, `λ+α`, `λ−2α`, ... for `anchor − kα`.
pub fn offset_label(k: i64) -> String {
    match k {
        0 => "λ".to_string(),
        1 => "λ−α".to_string(),
        -1 => "λ+α".to_string(),
        k if k > 0 => format!("λ−{k}α"),
        k => format!("λ+{}α", -k),
    }
}

pub fn quiver(block: &BlockId, window: &[Weight], cat: CategoryFlag, cap: usize) -> Result<Quiver> {
    if let Some(w) = window.iter().find(|w| !block.contains(w)) {
        return Err(Error::Precondition(format!("{w} is not in the block of {}", block.anchor())));
    }
    let mut vertices = window.to_vec();
    vertices.sort_by(|a, b| b.h.cmp(&a.h));
    vertices.dedup();
    let pairs: Vec<(usize, usize)> =
        (0..vertices.len()).flat_map(|a| (0..vertices.len()).map(move |b| (a, b))).collect();
    let dims: Vec<((usize, usize), usize)> = pairs
        .par_iter()
        .map(|&(a, b)| stabilize_ext(&vertices[a], &vertices[b], cat, cap).map(|r| ((a, b), r.dimension)))
        .collect::<Result<_>>()?;
    let arrows = dims.into_iter().filter(|&(_, d)| d > 0).collect();
    Ok(Quiver { block: block.clone(), category: cat, vertices, arrows })
}

impl Quiver {
    pub fn label(&self, i: usize) -> String {
        let k = self.block.anchor().steps_to(&self.vertices[i]).expect("vertex lies in the block");
        offset_label(k)
    }

    pub fn arrow(&self, a: usize, b: usize) -> usize {
        self.arrows.get(&(a, b)).copied().unwrap_or(0)
    }

    pub fn is_symmetric(&self) -> bool {
        self.arrows.iter().all(|(&(a, b), &d)| self.arrow(b, a) == d)
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        writeln!(out, "// λ = {}", self.block.anchor()).unwrap();
        writeln!(out, "// category {}", self.category.name()).unwrap();
        writeln!(out, "digraph quiver {{").unwrap();
        for i in 0..self.vertices.len() {
            writeln!(out, "  \"{}\";", self.label(i)).unwrap();
        }
        for (&(a, b), &d) in &self.arrows {
            for _ in 0..d {
                writeln!(out, "  \"{}\" -> \"{}\";", self.label(a), self.label(b)).unwrap();
            }
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Serialize, Deserialize)]
struct MapJson {
    from_depth: usize,
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, String)>,
}

fn cocycle_to_json(c: &Cocycle) -> BTreeMap<String, Vec<MapJson>> {
    c.maps
        .iter()
        .map(|(g, per)| {
            let list = per
                .iter()
                .map(|(&d, m)| MapJson {
                    from_depth: d,
                    rows: m.nrows(),
                    cols: m.ncols(),
                    entries: m.entries().map(|(r, c, x)| (r, c, fmt_q(x))).collect(),
                })
                .collect();
            (g.name().to_string(), list)
        })
        .collect()
}

fn cocycle_from_json(raw: BTreeMap<String, Vec<MapJson>>) -> Result<Cocycle> {
    let mut c = Cocycle::default();
    for (name, list) in raw {
        let g: Generator = name.parse()?;
        for m in list {
            let mut mat = SparseMatrix::zeros(m.rows, m.cols);
            for (r, col, x) in m.entries {
                if r >= m.rows || col >= m.cols {
                    return Err(Error::Invalid(format!("{name}: entry ({r},{col}) out of range")));
                }
                mat.set(r, col, parse_q(&x)?);
            }
            c.maps.entry(g).or_default().insert(m.from_depth, mat);
        }
    }
    Ok(c)
}

#[derive(Serialize, Deserialize)]
struct ExtJson {
    lambda: Weight,
    mu: Weight,
    category: CategoryFlag,
    dimension: usize,
    depths_checked: Vec<usize>,
    dims_by_depth: Vec<usize>,
    stabilized: bool,
    cocycle_basis: Vec<BTreeMap<String, Vec<MapJson>>>,
}

impl Serialize for ExtResult {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ExtJson {
            lambda: self.lambda.clone(),
            mu: self.mu.clone(),
            category: self.category,
            dimension: self.dimension,
            depths_checked: self.depths_checked.clone(),
            dims_by_depth: self.dims_by_depth.clone(),
            stabilized: self.stabilized,
            cocycle_basis: self.cocycle_basis.iter().map(cocycle_to_json).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExtResult {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = ExtJson::deserialize(d)?;
        let cocycle_basis =
            raw.cocycle_basis.into_iter().map(cocycle_from_json).collect::<Result<_>>().map_err(D::Error::custom)?;
        Ok(ExtResult {
            lambda: raw.lambda,
            mu: raw.mu,
            category: raw.category,
            dimension: raw.dimension,
            cocycle_basis,
            depths_checked: raw.depths_checked,
            dims_by_depth: raw.dims_by_depth,
            stabilized: raw.stabilized,
        })
    }
}

#[derive(Serialize)]
struct QuiverArrowJson {
    source: String,
    target: String,
    multiplicity: usize,
}

impl Serialize for Quiver {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let arrows: Vec<QuiverArrowJson> = self
            .arrows
            .iter()
            .map(|(&(a, b), &m)| QuiverArrowJson { source: self.label(a), target: self.label(b), multiplicity: m })
            .collect();
        let mut st = s.serialize_struct("Quiver", 4)?;
        st.serialize_field("block", &self.block)?;
        st.serialize_field("category", &self.category)?;
        st.serialize_field("vertices", &self.vertices)?;
        st.serialize_field("arrows", &arrows)?;
        st.end()
    }
}

/// Whether `x` is an integer.
pub fn is_integral(x: &Q) -> bool {
    x.is_integer()
}

/// Whether `x` is an odd multiple of `1/2`.
pub fn is_half_integral(x: &Q) -> bool {
    (x * q(2)).is_integer() && !x.is_integer()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::{check_relations, verma};
    use crate::rational::q_frac;
    use CategoryFlag::{OTilde, O};

    fn half() -> Weight {
        Weight::new(q_frac(1, 2), q(0))
    }

    #[test]
    fn blocks() {
        assert_eq!(block_of(&Weight::ints(3, 1)), BlockId::Nondegenerate { weight: Weight::ints(3, 1) });
        assert_eq!(block_of(&Weight::ints(5, 0)), BlockId::Coset { representative: Weight::ints(1, 0) });
        assert_eq!(block_of(&half()), block_of(&Weight::new(q_frac(-3, 2), q(0))));
        assert_eq!(
            block_of(&Weight::new(q_frac(7, 2), q(0))),
            BlockId::Coset { representative: Weight::new(q_frac(3, 2), q(0)) }
        );
        assert_eq!(block_of(&Weight::ints(-1, 0)), BlockId::Coset { representative: Weight::ints(1, 0) });
    }

    #[test]
    fn casimir_scalars() {
        assert_eq!(casimir_scalar(&Weight::ints(3, 1)), q(5));
        assert_eq!(casimir_scalar(&Weight::new(q_frac(2, 3), q(0))), q(0));
        let m = verma(&Weight::ints(3, 1), 4);
        let top = m.act_element(&crate::algebra::casimir(), 0).unwrap();
        assert_eq!(top.get(0, 0), q(5));
    }

    #[test]
    fn window_too_small() {
        assert!(matches!(ext1(&half(), &half().lowered(2), O, 5), Err(Error::WindowTooSmall { .. })));
    }

    #[test]
    fn self_extensions_nonintegral() {
        assert_eq!(ext1(&half(), &half(), O, 5).unwrap().dimension, 1);
        assert_eq!(ext1(&half(), &half(), OTilde, 5).unwrap().dimension, 2);
    }

    #[test]
    fn trivial_module_is_rigid() {
        let zero = Weight::ints(0, 0);
        assert_eq!(ext1(&zero, &zero, O, 5).unwrap().dimension, 0);
        assert_eq!(ext1(&zero, &zero, OTilde, 5).unwrap().dimension, 0);
    }

    #[test]
    fn finite_self_extension() {
        for cat in [O, OTilde] {
            assert_eq!(ext1(&Weight::ints(3, 0), &Weight::ints(3, 0), cat, 6).unwrap().dimension, 1);
        }
    }

    #[test]
    fn integral_long_arrow() {
        let r = ext1(&Weight::ints(2, 0), &Weight::ints(-4, 0), O, 8).unwrap();
        assert_eq!(r.dimension, 1);
    }

    #[test]
    fn distant_nonintegral_pair_vanishes() {
        assert_eq!(ext1(&half(), &half().lowered(2), O, 6).unwrap().dimension, 0);
    }

    #[test]
    fn different_cosets() {
        let r = stabilize_ext(&half(), &Weight::ints(0, 0), O, DEFAULT_DEPTH_CAP).unwrap();
        assert_eq!(r.dimension, 0);
        assert!(r.stabilized);
        assert_eq!(ext1(&Weight::ints(1, 1), &Weight::ints(1, 2), O, 4).unwrap().dimension, 0);
    }

    #[test]
    fn stabilization() {
        let r = stabilize_ext(&half(), &half().lowered(1), O, DEFAULT_DEPTH_CAP).unwrap();
        assert_eq!((r.dimension, r.stabilized), (1, true));
        assert_eq!(r.depths_checked.len(), 3);
        let err = stabilize_ext(&half(), &half(), O, 5).unwrap_err();
        assert!(matches!(err, Error::NotStabilized { cap: 5, .. }));
    }

    #[test]
    fn nondegenerate_self() {
        let lambda = Weight::new(q_frac(1, 3), q(2));
        assert_eq!(ext1(&lambda, &lambda, O, 4).unwrap().dimension, 1);
        assert_eq!(ext1(&lambda, &lambda, OTilde, 4).unwrap().dimension, 2);
    }

    #[test]
    fn cocycles_give_non_split_extensions() {
        for (lambda, mu, cat) in
            [(half(), half(), OTilde), (half(), half().lowered(1), O), (half().lowered(1), half(), O)]
        {
            let setup = ExtSetup::new(&lambda, &mu, 6).unwrap().unwrap();
            let w = ext1_in(&setup, cat);
            assert_eq!(w.representatives.len(), w.dimension);
            for c in &w.representatives {
                let m = extension_module(&setup, c).unwrap();
                assert!(check_relations(&m).passed(), "{lambda} -> {mu}");
                assert!(!is_coboundary(&setup, c));
                assert!(cat == OTilde || m.satisfies(O));
            }
        }
    }

    #[test]
    fn explicit_self_extension() {
        for n in 0..=3u64 {
            let (setup, c) = takiff_self_extension(n, n as usize + 5).unwrap();
            let m = extension_module(&setup, &c).unwrap();
            assert!(check_relations(&m).passed(), "n = {n}");
            assert_eq!(is_coboundary(&setup, &c), n == 0, "n = {n}");
        }
    }

    #[test]
    fn quiver_output() {
        let b = block_of(&half());
        let window: Vec<Weight> = (-1..=1).map(|k| half().lowered(k)).collect();
        let qv = quiver(&b, &window, O, DEFAULT_DEPTH_CAP).unwrap();
        assert!(qv.is_symmetric());
        let dot = qv.to_dot();
        assert!(dot.contains("\"λ\" -> \"λ\";"));
        assert!(dot.contains("\"λ+α\" -> \"λ\";"));
        assert!(!dot.contains("\"λ+α\" -> \"λ−α\";"));
        assert!(quiver(&b, &[Weight::ints(0, 0)], O, 40).is_err());
    }

    #[test]
    fn json_round_trip() {
        let r = ext1(&half(), &half(), OTilde, 5).unwrap();
        let back: ExtResult = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
    }
}
