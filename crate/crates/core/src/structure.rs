//! Singular vectors, submodules, quotients, composition multiplicities and the
//! submodule families of integral Verma modules.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::Generator;
use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseMatrix, SparseVec};
use crate::module::{simple_character, verma, verma_index, Character, TruncatedModule};
use crate::rational::{as_nonneg_int, fmt_q};
use crate::weight::Weight;

pub const DEFAULT_GUARD: usize = 2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularVectorSpace {
    pub weight: Weight,
    pub depth: usize,
    pub basis: Vec<SparseVec>,
}

impl SingularVectorSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

fn depth_of(m: &TruncatedModule, mu: &Weight) -> Result<usize> {
    match m.top().steps_to(mu) {
        Some(k) if k >= 0 && k as usize <= m.depth() => Ok(k as usize),
        _ => Err(Error::WeightNotInWindow),
    }
}

/// Joint kernel of `e`, `ē`, `h − μ(h)`, `h̄ − μ(h̄)` on the weight space of `μ`.
pub fn singular_vectors(m: &TruncatedModule, mu: &Weight) -> Result<SingularVectorSpace> {
    let k = depth_of(m, mu)?;
    let mut eqs = Echelon::new(m.dims()[k]);
    for g in [Generator::E, Generator::EBar] {
        let a = m.act(g, k).expect("raising never leaves the window");
        for r in 0..a.nrows() {
            eqs.insert(a.row(r).clone());
        }
    }
    for g in [Generator::H, Generator::HBar] {
        let a = m.cartan_shifted(g, k);
        for r in 0..a.nrows() {
            eqs.insert(a.row(r).clone());
        }
    }
    Ok(SingularVectorSpace { weight: mu.clone(), depth: k, basis: eqs.null_space() })
}

/// Codimension of `f·M + f̄·M + (h − μ(h))M + (h̄ − μ(h̄))M` in the weight space of `μ`.
/// Under the duality this is the dimension of the singular vectors of the dual.
pub fn cosingular_dim(m: &TruncatedModule, mu: &Weight) -> Result<usize> {
    let k = depth_of(m, mu)?;
    let mut image = Echelon::new(m.dims()[k]);
    if k > 0 {
        for g in [Generator::F, Generator::FBar] {
            let a = m.matrix(g, k - 1).expect("lowering into the window is stored");
            for c in 0..a.ncols() {
                image.insert(a.column(c));
            }
        }
    }
    for g in [Generator::H, Generator::HBar] {
        let a = m.cartan_shifted(g, k);
        for c in 0..a.ncols() {
            image.insert(a.column(c));
        }
    }
    Ok(m.dims()[k] - image.rank())
}

/// A graded subspace of a truncated module, one echelon basis per depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSubspace {
    spaces: Vec<Echelon>,
}

impl GradedSubspace {
    pub fn zero(m: &TruncatedModule) -> Self {
        Self { spaces: m.dims().iter().map(|&d| Echelon::new(d)).collect() }
    }

    pub fn at(&self, n: usize) -> &Echelon {
        &self.spaces[n]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.spaces.iter().map(Echelon::rank).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.spaces.iter().map(Echelon::rank).sum()
    }

    pub fn contains(&self, depth: usize, v: &SparseVec) -> bool {
        self.spaces[depth].contains(v)
    }

    pub fn contains_all(&self, other: &GradedSubspace) -> bool {
        self.spaces.iter().zip(&other.spaces).all(|(a, b)| a.contains_all(b))
    }

    /// Whether every action keeps the subspace, wherever the target is in the window.
    pub fn is_closed_in(&self, m: &TruncatedModule) -> bool {
        self.first_escape(m).is_none()
    }

    fn first_escape(&self, m: &TruncatedModule) -> Option<(Generator, usize)> {
        for g in Generator::ALL {
            for (n, space) in self.spaces.iter().enumerate() {
                let t = n as isize + g.depth_shift();
                let Some(a) = m.matrix(g, n) else { continue };
                if space.basis().any(|v| !self.spaces[t as usize].contains(&a.apply(v))) {
                    return Some((g, n));
                }
            }
        }
        None
    }
}

/// A submodule: the ambient subspace and the module it carries, in the echelon basis.
#[derive(Clone, Debug)]
pub struct Submodule {
    pub space: GradedSubspace,
    pub module: TruncatedModule,
}

/// Smallest action-closed graded subspace containing `generators` (pairs of depth and vector).
pub fn generated_subspace(m: &TruncatedModule, generators: &[(usize, SparseVec)]) -> Result<GradedSubspace> {
    let mut space = GradedSubspace::zero(m);
    let mut queue: Vec<(usize, SparseVec)> = Vec::new();
    for (d, v) in generators {
        if *d > m.depth() {
            return Err(Error::WeightNotInWindow);
        }
        if v.max_index().is_some_and(|i| i >= m.dims()[*d]) {
            return Err(Error::Invalid(format!(
                "generator has an entry beyond dimension {} at depth {d}",
                m.dims()[*d]
            )));
        }
        queue.push((*d, v.clone()));
    }
    while let Some((d, v)) = queue.pop() {
        let r = space.spaces[d].reduce(&v);
        if r.is_zero() {
            continue;
        }
        space.spaces[d].insert(r.clone());
        for g in Generator::ALL {
            if let Some(a) = m.matrix(g, d) {
                let w = a.apply(&r);
                if !w.is_zero() {
                    queue.push(((d as isize + g.depth_shift()) as usize, w));
                }
            }
        }
    }
    Ok(space)
}

/// Module structure on a closed subspace, in its echelon basis.
pub fn induced_module(m: &TruncatedModule, space: &GradedSubspace) -> Result<TruncatedModule> {
    if let Some((g, n)) = space.first_escape(m) {
        return Err(Error::NotClosed { generator: g.name(), depth: n });
    }
    let mut actions = BTreeMap::new();
    for g in Generator::ALL {
        let per_depth = (0..=m.depth())
            .map(|n| {
                m.matrix(g, n).map(|a| {
                    let t = (n as isize + g.depth_shift()) as usize;
                    let target = &space.spaces[t];
                    let cols: Vec<SparseVec> = space.spaces[n]
                        .basis()
                        .map(|v| target.coordinates(&a.apply(v)).into_iter().enumerate().collect())
                        .collect();
                    SparseMatrix::from_columns(target.rank(), &cols)
                })
            })
            .collect();
        actions.insert(g, per_depth);
    }
    TruncatedModule::from_parts(m.top().clone(), space.dims(), actions, m.is_truncated())
}

pub fn submodule(m: &TruncatedModule, generators: &[(usize, SparseVec)]) -> Result<Submodule> {
    let space = generated_subspace(m, generators)?;
    let module = induced_module(m, &space)?;
    Ok(Submodule { space, module })
}

/// `M / S`, with basis the non-pivot coordinate vectors of `S` at each depth.
pub fn quotient(m: &TruncatedModule, s: &GradedSubspace) -> Result<TruncatedModule> {
    if let Some((g, n)) = s.first_escape(m) {
        return Err(Error::NotClosed { generator: g.name(), depth: n });
    }
    let free: Vec<Vec<usize>> = s.spaces.iter().map(Echelon::free_columns).collect();
    let mut actions = BTreeMap::new();
    for g in Generator::ALL {
        let per_depth = (0..=m.depth())
            .map(|n| {
                m.matrix(g, n).map(|a| {
                    let t = (n as isize + g.depth_shift()) as usize;
                    let cols: Vec<SparseVec> = free[n]
                        .iter()
                        .map(|&c| {
                            let image = s.spaces[t].reduce(&a.column(c));
                            free[t].iter().enumerate().map(|(k, &fc)| (k, image.get(fc))).collect()
                        })
                        .collect();
                    SparseMatrix::from_columns(free[t].len(), &cols)
                })
            })
            .collect();
        actions.insert(g, per_depth);
    }
    let dims = free.iter().map(Vec::len).collect();
    TruncatedModule::from_parts(m.top().clone(), dims, actions, m.is_truncated())
}

/// Composition multiplicities `depth k ↦ [M : L(top − kα)]` on the trusted window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplicityTable {
    pub top: Weight,
    pub entries: BTreeMap<usize, usize>,
    pub guard: usize,
    pub trusted_depth: usize,
}

impl MultiplicityTable {
    pub fn get(&self, k: usize) -> usize {
        self.entries.get(&k).copied().unwrap_or(0)
    }

    /// `Σ_k entries[k] · ch L(top − kα)` on depths `0..=trusted_depth`.
    pub fn reconstruct(&self) -> Vec<usize> {
        let mut out = vec![0; self.trusted_depth + 1];
        for (&k, &mult) in &self.entries {
            let ch = simple_character(&self.top.lowered(k as i64), self.trusted_depth - k);
            for (d, x) in ch.into_iter().enumerate() {
                out[k + d] += mult * x;
            }
        }
        out
    }
}

/// Peels simple characters off `ch`, shallowest depth first.
pub fn multiplicities(ch: &Character, guard: usize) -> Result<MultiplicityTable> {
    let n = ch.truncation_depth();
    if guard > n {
        return Err(Error::WindowTooSmall { needed: guard, got: n });
    }
    let trusted = n - guard;
    let mut residual: Vec<i64> = (0..=trusted).map(|d| ch.get(d) as i64).collect();
    let mut entries = BTreeMap::new();
    for k in 0..=trusted {
        let r = residual[k];
        if r < 0 {
            return Err(Error::NegativeResidual { depth: k });
        }
        if r == 0 {
            continue;
        }
        let simple = simple_character(&ch.top().lowered(k as i64), trusted - k);
        for (d, x) in simple.into_iter().enumerate() {
            residual[k + d] -= r * x as i64;
        }
        entries.insert(k, r as usize);
    }
    Ok(MultiplicityTable { top: ch.top().clone(), entries, guard, trusted_depth: trusted })
}

fn integral_top(lambda: &Weight) -> Result<usize> {
    match (lambda.is_degenerate(), as_nonneg_int(&lambda.h)) {
        (true, Some(n)) => Ok(n as usize),
        _ => Err(Error::Precondition(format!("{lambda} needs h̄-value 0 and a nonnegative integral h-value"))),
    }
}

/// The vector `f^i f̄^j v_λ` of the Verma module.
pub fn verma_vector(i: usize, j: usize) -> (usize, SparseVec) {
    (i + j, SparseVec::unit(verma_index(i, j)))
}

/// Singular vectors of `m` whose cyclic submodule has the character of the
/// simple module of their weight, each with that submodule.
pub fn simple_socle_candidates(m: &TruncatedModule) -> Result<Vec<(usize, SparseVec, Submodule)>> {
    let mut out = Vec::new();
    for k in 0..=m.depth() {
        let mu = m.weight_at(k);
        for v in singular_vectors(m, &mu)?.basis {
            let sub = submodule(m, &[(k, v.clone())])?;
            let mut expect = vec![0; k];
            expect.extend(simple_character(&mu, m.depth() - k));
            if sub.module.dims() == expect {
                out.push((k, v, sub));
            }
        }
    }
    Ok(out)
}

/// One layer of a uniserial filtration, listed from the top.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Layer {
    pub weight: Weight,
    pub character: Character,
}

#[derive(Clone, Debug)]
pub struct Filtration {
    pub kernel: Submodule,
    pub quotient: TruncatedModule,
    /// Top first.
    pub layers: Vec<Layer>,
}

/// Socle series of `Δ(λ)/K_n` for `K_n = U(g) f^{n+1} v_λ`.
///
/// Fails unless every socle step is simple: exactly one singular vector whose
/// cyclic submodule has the character of the corresponding simple module.
pub fn mn_filtration(lambda: &Weight, depth: usize) -> Result<Filtration> {
    let n = integral_top(lambda)?;
    if depth < n + 1 {
        return Err(Error::WindowTooSmall { needed: n + 1, got: depth });
    }
    let delta = verma(lambda, depth);
    let kernel = submodule(&delta, &[verma_vector(n + 1, 0)])?;
    let quotient = quotient(&delta, &kernel.space)?;
    let mut layers = Vec::new();
    let mut rest = quotient.clone();
    while rest.total_dim() > 0 {
        let mut candidates = simple_socle_candidates(&rest)?;
        if candidates.len() != 1 {
            let at: Vec<usize> = candidates.iter().map(|c| c.0).collect();
            return Err(Error::StructureMismatch(format!("socle is not simple: candidates at depths {at:?}")));
        }
        let (k, _, soc) = candidates.pop().expect("one candidate");
        let weight = lambda.lowered(k as i64);
        layers.push(Layer { weight, character: soc.module.character() });
        rest = self::quotient(&rest, &soc.space)?;
    }
    layers.reverse();
    Ok(Filtration { kernel, quotient, layers })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PosetNode {
    pub label: String,
    pub generator_depth: usize,
    pub dims: Vec<usize>,
}

/// Submodules of `Δ(λ)` of the form `Δ(λ−iα)` and `K_j`, ordered by inclusion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubmodulePoset {
    pub top: Weight,
    pub depth: usize,
    pub nodes: Vec<PosetNode>,
    /// Covering relations `(larger, smaller)` by node index.
    pub edges: Vec<(usize, usize)>,
}

pub fn delta_label(i: usize) -> String {
    match i {
        0 => "Δ(λ)".to_string(),
        1 => "Δ(λ−α)".to_string(),
        _ => format!("Δ(λ−{i}α)"),
    }
}

pub fn k_label(j: usize) -> String {
    format!("K_{j}")
}

/// `⌈(n−1)/2⌉`, clamped at 0.
pub fn hasse_k(n: usize) -> usize {
    n / 2
}

pub fn hasse_diagram(lambda: &Weight, depth: usize) -> Result<SubmodulePoset> {
    let n = integral_top(lambda)?;
    let k = hasse_k(n);
    let needed = (k + 2).max(n + 1);
    if depth < needed {
        return Err(Error::WindowTooSmall { needed, got: depth });
    }
    let delta = verma(lambda, depth);
    let mut named: Vec<(String, (usize, SparseVec))> = Vec::new();
    for i in 0..=k + 2 {
        named.push((delta_label(i), verma_vector(0, i)));
    }
    for i in 0..=k {
        named.push((k_label(n - 2 * i), verma_vector(n - 2 * i + 1, i)));
    }
    let spaces: Vec<GradedSubspace> =
        named.iter().map(|(_, g)| generated_subspace(&delta, std::slice::from_ref(g))).collect::<Result<_>>()?;
    let nodes: Vec<PosetNode> = named
        .iter()
        .zip(&spaces)
        .map(|((label, (d, _)), s)| PosetNode { label: label.clone(), generator_depth: *d, dims: s.dims() })
        .collect();
    let count = nodes.len();
    let below = |a: usize, b: usize| {
        a != b && spaces[a] != spaces[b] && {
            let (d, v) = &named[b].1;
            spaces[a].contains(*d, v)
        }
    };
    let mut edges = Vec::new();
    for a in 0..count {
        for b in 0..count {
            if below(a, b) && !(0..count).any(|c| below(a, c) && below(c, b)) {
                edges.push((a, b));
            }
        }
    }
    edges.sort_by(|x, y| (&nodes[x.0].label, &nodes[x.1].label).cmp(&(&nodes[y.0].label, &nodes[y.1].label)));
    Ok(SubmodulePoset { top: lambda.clone(), depth, nodes, edges })
}

impl SubmodulePoset {
    pub fn label_edges(&self) -> Vec<(String, String)> {
        self.edges.iter().map(|&(a, b)| (self.nodes[a].label.clone(), self.nodes[b].label.clone())).collect()
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        writeln!(out, "// top weight {}", self.top).unwrap();
        writeln!(out, "digraph submodules {{").unwrap();
        let mut order: Vec<usize> = (0..self.nodes.len()).collect();
        order.sort_by(|&a, &b| self.nodes[a].label.cmp(&self.nodes[b].label));
        for i in order {
            let node = &self.nodes[i];
            let dims: Vec<String> = node.dims.iter().map(usize::to_string).collect();
            writeln!(out, "  \"{}\" [label=\"{}\\n[{}]\"];", node.label, node.label, dims.join(" ")).unwrap();
        }
        for (a, b) in self.label_edges() {
            writeln!(out, "  \"{a}\" -> \"{b}\";").unwrap();
        }
        out.push_str("}\n");
        out
    }
}

/// Short human-readable description of a vector in the Verma basis at depth `d`.
pub fn describe_verma_vector(d: usize, v: &SparseVec) -> String {
    let mut parts = Vec::new();
    for (j, c) in v.iter() {
        let i = d - j;
        let mono = match (i, j) {
            (0, 0) => "v".to_string(),
            _ => {
                let pow = |s: &str, e: usize| match e {
                    0 => String::new(),
                    1 => s.to_string(),
                    _ => format!("{s}^{e}"),
                };
                format!("{}{}v", pow("f", i), pow("f̄", j))
            }
        };
        parts.push(if c.is_zero() { continue } else { format!("{}·{mono}", fmt_q(c)) });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::{check_relations, simple_module};
    use crate::rational::{q, q_frac};

    #[test]
    fn singular_fbar_when_degenerate() {
        let lambda = Weight::new(q_frac(3, 7), q(0));
        let m = verma(&lambda, 5);
        let s = singular_vectors(&m, &lambda.lowered(1)).unwrap();
        assert_eq!(s.basis, vec![verma_vector(0, 1).1]);
    }

    #[test]
    fn no_singular_when_nondegenerate() {
        let lambda = Weight::new(q_frac(3, 7), q(2));
        let m = verma(&lambda, 6);
        for k in 1..=5 {
            assert_eq!(singular_vectors(&m, &lambda.lowered(k)).unwrap().dim(), 0);
        }
        assert_eq!(singular_vectors(&m, &lambda).unwrap().dim(), 1);
    }

    #[test]
    fn singular_outside_window() {
        let m = verma(&Weight::ints(1, 0), 3);
        assert_eq!(singular_vectors(&m, &Weight::ints(1, 0).lowered(4)), Err(Error::WeightNotInWindow));
        assert_eq!(singular_vectors(&m, &Weight::ints(2, 0)), Err(Error::WeightNotInWindow));
        assert_eq!(singular_vectors(&m, &Weight::ints(1, 1)), Err(Error::WeightNotInWindow));
    }

    #[test]
    fn cosingular_matches_dual() {
        let lambda = Weight::ints(2, 0);
        let m = verma(&lambda, 5);
        let d = m.dualize();
        for k in 0..=5 {
            let mu = lambda.lowered(k);
            assert_eq!(cosingular_dim(&m, &mu).unwrap(), singular_vectors(&d, &mu).unwrap().dim(), "depth {k}");
        }
    }

    #[test]
    fn submodule_and_quotient() {
        let lambda = Weight::new(q_frac(1, 2), q(0));
        let m = verma(&lambda, 6);
        let s = submodule(&m, &[verma_vector(0, 1)]).unwrap();
        assert_eq!(s.module.dims(), &[0, 1, 2, 3, 4, 5, 6]);
        assert!(check_relations(&s.module).passed());
        let q = quotient(&m, &s.space).unwrap();
        assert_eq!(q.dims(), &[1; 7]);
        assert!(check_relations(&q).passed());
        assert!(isomorphic_to_simple(&q, &lambda));
        assert_eq!(m.character(), s.module.character().plus(&q.character()).unwrap());
    }

    fn isomorphic_to_simple(m: &TruncatedModule, lambda: &Weight) -> bool {
        crate::module::isomorphism(m, &simple_module(lambda, m.depth())).unwrap().is_some()
    }

    #[test]
    fn trivial_submodules() {
        let m = verma(&Weight::ints(1, 3), 3);
        let z = submodule(&m, &[(2, SparseVec::new())]).unwrap();
        assert_eq!(z.module.total_dim(), 0);
        assert_eq!(quotient(&m, &z.space).unwrap(), m);
        let whole = submodule(&m, &[verma_vector(0, 0)]).unwrap();
        assert_eq!(whole.module.dims(), m.dims());
    }

    #[test]
    fn quotient_rejects_open_subspace() {
        let m = verma(&Weight::ints(1, 0), 3);
        let mut s = GradedSubspace::zero(&m);
        s.spaces[1].insert(verma_vector(1, 0).1);
        assert!(matches!(quotient(&m, &s), Err(Error::NotClosed { .. })));
    }

    #[test]
    fn peeling() {
        let simple = simple_module(&Weight::ints(3, 0), 8).character();
        let t = multiplicities(&simple, 2).unwrap();
        assert_eq!(t.entries, BTreeMap::from([(0, 1)]));
        let t = multiplicities(&verma(&Weight::new(q_frac(1, 2), q(0)), 10).character(), 2).unwrap();
        assert!((0..=8).all(|k| t.get(k) == 1));
        let t = multiplicities(&verma(&Weight::ints(0, 0), 10).character(), 2).unwrap();
        let got: Vec<usize> = (0..=8).map(|k| t.get(k)).collect();
        assert_eq!(got, vec![1, 2, 1, 1, 1, 1, 1, 1, 1]);
        assert_eq!(t.reconstruct(), verma(&Weight::ints(0, 0), 8).dims());
    }

    #[test]
    fn peeling_errors() {
        let ch = Character::new(Weight::ints(0, 0), vec![1, 0, 0, 0]);
        let bad = Character::new(Weight::new(q_frac(1, 2), q(0)), vec![2, 1, 1, 1]);
        assert!(multiplicities(&ch, 2).is_ok());
        assert_eq!(multiplicities(&bad, 1), Err(Error::NegativeResidual { depth: 1 }));
        assert!(multiplicities(&ch, 4).is_err());
    }

    #[test]
    fn filtration_layers() {
        for (n, count) in [(0usize, 1usize), (1, 1), (4, 3)] {
            let lambda = Weight::ints(n as i64, 0);
            let f = mn_filtration(&lambda, n + 3).unwrap();
            assert_eq!(f.layers.len(), count);
            for (i, layer) in f.layers.iter().enumerate() {
                assert_eq!(layer.weight, lambda.lowered(i as i64));
            }
        }
        assert!(mn_filtration(&Weight::new(q_frac(1, 2), q(0)), 5).is_err());
        assert!(mn_filtration(&Weight::ints(3, 0), 3).is_err());
    }

    #[test]
    fn hasse_top_rows() {
        let p = hasse_diagram(&Weight::ints(4, 0), 8).unwrap();
        let edges = p.label_edges();
        let from_top: Vec<&str> = edges.iter().filter(|(a, _)| a == "Δ(λ)").map(|(_, b)| b.as_str()).collect();
        assert_eq!(from_top, vec!["K_4", "Δ(λ−α)"]);
        let dot = p.to_dot();
        assert!(dot.contains("\"Δ(λ)\" -> \"K_4\";"));
        assert!(hasse_diagram(&Weight::ints(4, 0), 3).is_err());
    }

    #[test]
    fn vector_descriptions() {
        let (d, v) = verma_vector(2, 1);
        assert_eq!(describe_verma_vector(d, &v), "1·f^2f̄v");
        assert_eq!(describe_verma_vector(0, &SparseVec::unit(0)), "1·v");
    }
}
