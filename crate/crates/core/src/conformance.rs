//! Self-checks of the library against known closed-form results, used by the
//! `paper-check` command. Each check carries a stable identifier.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{bracket, bracket_generators, casimir, commutator_with_generator, Generator, LieElement};
use crate::ext::{block_of, casimir_scalar, quiver, stabilize_ext};
use crate::module::{verma, CategoryFlag, TruncatedModule};
use crate::rational::{q, q_frac};
use crate::structure::{
    delta_label, hasse_diagram, hasse_k, k_label, mn_filtration, multiplicities, singular_vectors, verma_vector,
    DEFAULT_GUARD,
};
use crate::weight::Weight;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub id: String,
    pub claim: String,
    pub expected: String,
    pub observed: String,
    pub passed: bool,
}

impl Check {
    fn new(id: impl Into<String>, claim: impl Into<String>, expected: impl ToString, observed: impl ToString) -> Self {
        let (expected, observed) = (expected.to_string(), observed.to_string());
        let passed = expected == observed;
        Self { id: id.into(), claim: claim.into(), expected, observed, passed }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
    pub passed: usize,
    pub failed: usize,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

/// One expected value of `dim Ext¹(L(λ), L(μ))`.
#[derive(Clone, Debug)]
pub struct ExtClaim {
    pub id: &'static str,
    pub lambda: Weight,
    pub mu: Weight,
    pub category: CategoryFlag,
    pub expected: usize,
}

fn w(h: (i64, i64), hbar: i64) -> Weight {
    Weight::new(q_frac(h.0, h.1), q(hbar))
}

/// Expected extension dimensions between simples.
pub fn ext_claims() -> Vec<ExtClaim> {
    use CategoryFlag::{OTilde, O};
    let mut out = Vec::new();
    let mut push =
        |id, lambda: Weight, mu: Weight, category, expected| out.push(ExtClaim { id, lambda, mu, category, expected });
    for h in [(1, 2), (-1, 3)] {
        let l = w(h, 0);
        push("nonintegral-self-O", l.clone(), l.clone(), O, 1);
        push("nonintegral-self-Otilde", l.clone(), l.clone(), OTilde, 2);
        for cat in [O, OTilde] {
            push("nonintegral-neighbour", l.clone(), l.lowered(1), cat, 1);
            push("nonintegral-neighbour", l.clone(), l.lowered(-1), cat, 1);
            push("nonintegral-distant", l.clone(), l.lowered(2), cat, 0);
            push("nonintegral-distant", l.clone(), l.lowered(-3), cat, 0);
        }
    }
    for h in [-1, -2] {
        let l = w((h, 1), 0);
        push("antidominant-self-O", l.clone(), l.clone(), O, 1);
        push("antidominant-self-Otilde", l.clone(), l.clone(), OTilde, 2);
    }
    for cat in [O, OTilde] {
        push("trivial-self", Weight::ints(0, 0), Weight::ints(0, 0), cat, 0);
    }
    for n in 1..=3 {
        for cat in [O, OTilde] {
            push("finite-self", Weight::ints(n, 0), Weight::ints(n, 0), cat, 1);
        }
    }
    for h in [0, 1, 2, 3, -1, -3] {
        for cat in [O, OTilde] {
            push("degenerate-neighbour", Weight::ints(h, 0), Weight::ints(h - 2, 0), cat, 1);
        }
    }
    for n in 0..=2 {
        for cat in [O, OTilde] {
            push("dominant-reflection", Weight::ints(n, 0), Weight::ints(-n - 2, 0), cat, 1);
        }
    }
    for cat in [O, OTilde] {
        push("different-cosets", w((1, 2), 0), Weight::ints(0, 0), cat, 0);
        push("different-cosets", Weight::ints(1, 1), Weight::ints(1, 2), cat, 0);
    }
    // vanishing for every other shift
    for (h, k) in [(0, 2), (0, 3), (1, 3), (2, 2), (2, 4), (3, 2), (3, 3), (-1, 2)] {
        push("other-shifts-vanish", Weight::ints(h, 0), Weight::ints(h, 0).lowered(k), O, 0);
    }
    let nd = w((1, 3), 2);
    push("nondegenerate-self-O", nd.clone(), nd.clone(), O, 1);
    push("nondegenerate-self-Otilde", nd.clone(), nd, OTilde, 2);
    out
}

/// Covering relations of the inclusion diagram of `Δ(λ−iα)` and `K_j` inside `Δ(λ)`
/// for `λ = (n, 0)`, as `(larger, smaller)` labels.
pub fn expected_hasse_edges(n: usize) -> BTreeSet<(String, String)> {
    let k = hasse_k(n);
    let mut out = BTreeSet::new();
    for i in 0..k {
        out.insert((delta_label(i), k_label(n - 2 * i)));
        out.insert((delta_label(i), delta_label(i + 1)));
        out.insert((k_label(n - 2 * i), k_label(n - 2 * i - 2)));
    }
    out.insert((delta_label(k), k_label(n - 2 * k)));
    out.insert((k_label(n - 2 * k), delta_label(k + 1)));
    out.insert((delta_label(k + 1), delta_label(k + 2)));
    out
}

fn algebra_checks() -> Vec<Check> {
    let gens: Vec<LieElement> = Generator::ALL.iter().map(|&g| LieElement::generator(g)).collect();
    let mut anti = 0;
    let mut jacobi = 0;
    for x in &gens {
        for y in &gens {
            if !bracket(x, y).plus(&bracket(y, x)).is_zero() {
                anti += 1;
            }
            for z in &gens {
                let s = bracket(x, &bracket(y, z)).plus(&bracket(y, &bracket(z, x))).plus(&bracket(z, &bracket(x, y)));
                if !s.is_zero() {
                    jacobi += 1;
                }
            }
        }
    }
    let c = casimir();
    let central = Generator::ALL.iter().filter(|&&g| commutator_with_generator(&c, g).is_zero()).count();
    vec![
        Check::new("bracket-antisymmetry", "[x,y] = −[y,x] on all 36 generator pairs", 0, anti),
        Check::new("bracket-jacobi", "Jacobi identity on all 216 generator triples", 0, jacobi),
        Check::new("casimir-central", "the Casimir element commutes with every generator", 6, central),
        Check::new("bracket-ebar-f", "[ē, f] = h̄", "h̄", bracket_generators(Generator::EBar, Generator::F)),
    ]
}

fn module_checks() -> Vec<Check> {
    let mut out = Vec::new();
    let lambda = w((1, 2), 0);
    let dims: Vec<usize> = verma(&lambda, 10).dims().to_vec();
    out.push(Check::new(
        "verma-dims",
        "dim Δ(λ) at depth n is n+1",
        format!("{:?}", (1..=11).collect::<Vec<_>>()),
        format!("{dims:?}"),
    ));
    let l = w((5, 3), 7);
    let m = verma(&l, 1);
    out.push(Check::new(
        "hbar-jordan-block",
        "h̄ on {f v, f̄ v} is [[λ(h̄),0],[−2,λ(h̄)]]",
        "[[7, 0], [-2, 7]]",
        dense_string(m.matrix(Generator::HBar, 1).expect("present")),
    ));
    let nd = Weight::ints(3, 1);
    let found: usize = (1..=6).map(|k| singular_vectors(&verma(&nd, 7), &nd.lowered(k)).map_or(99, |s| s.dim())).sum();
    out.push(Check::new(
        "simple-iff-nondegenerate",
        "Δ(λ) has no singular vectors below the top when λ(h̄) ≠ 0",
        0,
        found,
    ));
    let s = singular_vectors(&verma(&lambda, 4), &lambda.lowered(1)).map(|s| s.basis == vec![verma_vector(0, 1).1]);
    out.push(Check::new("fbar-singular", "f̄ v_λ is singular when λ(h̄) = 0", true, s.unwrap_or(false)));
    let scalar = verma(&nd, 2).act_element(&casimir(), 0).map(|m| m.get(0, 0));
    out.push(Check::new(
        "casimir-scalar",
        "the Casimir element acts on v_λ by λ(h̄)(λ(h)+2)",
        crate::rational::fmt_q(&casimir_scalar(&nd)),
        scalar.map_or("undefined".into(), |x| crate::rational::fmt_q(&x)),
    ));
    out
}

fn dense_string(m: &crate::linalg::SparseMatrix) -> String {
    let rows: Vec<String> = m
        .to_dense()
        .iter()
        .map(|r| format!("[{}]", r.iter().map(crate::rational::fmt_q).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("[{}]", rows.join(", "))
}

fn structure_checks() -> Vec<Check> {
    let mut out = Vec::new();
    let peel = |lambda: Weight| -> String {
        match multiplicities(&verma(&lambda, 9).character(), DEFAULT_GUARD) {
            Ok(t) => format!("{:?}", (0..=t.trusted_depth).map(|k| t.get(k)).collect::<Vec<_>>()),
            Err(e) => e.to_string(),
        }
    };
    out.push(Check::new(
        "peel-nonintegral",
        "Δ(λ) for nonintegral λ has every L(λ−kα) once",
        "[1, 1, 1, 1, 1, 1, 1, 1]",
        peel(w((1, 2), 0)),
    ));
    out.push(Check::new(
        "peel-zero",
        "Δ(0) has multiplicities 1, 2, 1, 1, ...",
        "[1, 2, 1, 1, 1, 1, 1, 1]",
        peel(Weight::ints(0, 0)),
    ));
    out.push(Check::new(
        "peel-nondegenerate",
        "Δ(λ) is simple when λ(h̄) ≠ 0",
        "[1, 0, 0, 0, 0, 0, 0, 0]",
        peel(Weight::ints(2, 1)),
    ));
    for n in 0..=6usize {
        let lambda = Weight::ints(n as i64, 0);
        let observed = match mn_filtration(&lambda, n + 3) {
            Ok(f) => f.layers.len().to_string(),
            Err(e) => e.to_string(),
        };
        out.push(Check::new(
            format!("mn-uniserial-{n}"),
            "Δ(n)/K_n is uniserial of length ⌈(n+1)/2⌉",
            filtration_expected(n),
            observed,
        ));
    }
    let n = 4;
    let observed = hasse_diagram(&Weight::ints(n as i64, 0), n + 4)
        .map(|p| p.label_edges().into_iter().collect::<BTreeSet<_>>() == expected_hasse_edges(n))
        .unwrap_or(false);
    out.push(Check::new("hasse-n4", "inclusion diagram of Δ(λ−iα) and K_j for n = 4", true, observed));
    out
}

fn filtration_expected(n: usize) -> usize {
    (n + 2) / 2
}

fn ext_checks(cap: usize) -> Vec<Check> {
    let claims = ext_claims();
    let mut out: Vec<Check> = claims
        .par_iter()
        .map(|c| {
            let observed = match stabilize_ext(&c.lambda, &c.mu, c.category, cap) {
                Ok(r) => r.dimension.to_string(),
                Err(e) => e.to_string(),
            };
            let claim = format!("dim Ext¹(L{}, L{}) in {}", c.lambda, c.mu, c.category.name());
            Check::new(format!("ext-{}", c.id), claim, c.expected, observed)
        })
        .collect();
    let symmetric = claims
        .par_iter()
        .map(|c| {
            let a = stabilize_ext(&c.lambda, &c.mu, c.category, cap).map(|r| r.dimension);
            let b = stabilize_ext(&c.mu, &c.lambda, c.category, cap).map(|r| r.dimension);
            usize::from(a.is_err() || a != b)
        })
        .sum::<usize>();
    out.push(Check::new("ext-duality-symmetry", "Ext¹(L(λ),L(μ)) ≅ Ext¹(L(μ),L(λ)) on the table", 0, symmetric));
    out
}

/// Expected quiver of a window: `(vertices as offsets from the anchor, arrows by
/// vertex index in the same order, with multiplicities)`.
struct QuiverClaim {
    id: &'static str,
    anchor: Weight,
    offsets: Vec<i64>,
    arrows: BTreeMap<(usize, usize), usize>,
}

fn symmetric(pairs: &[(usize, usize)], loops: &[(usize, usize)]) -> BTreeMap<(usize, usize), usize> {
    let mut out = BTreeMap::new();
    for &(a, b) in pairs {
        out.insert((a, b), 1);
        out.insert((b, a), 1);
    }
    for &(v, d) in loops {
        out.insert((v, v), d);
    }
    out
}

fn quiver_claims(cat: CategoryFlag) -> Vec<QuiverClaim> {
    let thick = if cat == CategoryFlag::O { 1 } else { 2 };
    let chain = |n: usize| -> Vec<(usize, usize)> { (0..n - 1).map(|i| (i, i + 1)).collect() };
    let with = |mut v: Vec<(usize, usize)>, extra: &[(usize, usize)]| {
        v.extend_from_slice(extra);
        v
    };
    vec![
        QuiverClaim {
            id: "quiver-nondegenerate",
            anchor: w((1, 3), 2),
            offsets: vec![0],
            arrows: symmetric(&[], &[(0, thick)]),
        },
        QuiverClaim {
            id: "quiver-nonintegral",
            anchor: w((1, 2), 0),
            offsets: (-2..=2).collect(),
            arrows: symmetric(&chain(5), &(0..5).map(|v| (v, thick)).collect::<Vec<_>>()),
        },
        // h = 4, 2, 0, -2, -4, -6
        QuiverClaim {
            id: "quiver-integral",
            anchor: Weight::ints(0, 0),
            offsets: (-2..=3).collect(),
            arrows: symmetric(
                &with(chain(6), &[(0, 5), (1, 4)]),
                &[(0, 1), (1, 1), (3, thick), (4, thick), (5, thick)],
            ),
        },
        // h = 5, 3, 1, -1, -3, -5
        QuiverClaim {
            id: "quiver-odd",
            anchor: Weight::ints(1, 0),
            offsets: (-2..=3).collect(),
            arrows: symmetric(
                &with(chain(6), &[(2, 4), (1, 5)]),
                &[(0, 1), (1, 1), (2, 1), (3, thick), (4, thick), (5, thick)],
            ),
        },
    ]
}

fn arrows_string(arrows: &BTreeMap<(usize, usize), usize>) -> String {
    arrows.iter().map(|((a, b), d)| format!("{a}{b}:{d}")).collect::<Vec<_>>().join(" ")
}

fn quiver_checks(cap: usize) -> Vec<Check> {
    let mut out = Vec::new();
    for cat in [CategoryFlag::O, CategoryFlag::OTilde] {
        for c in quiver_claims(cat) {
            let window: Vec<Weight> = c.offsets.iter().map(|&k| c.anchor.lowered(k)).collect();
            let observed = match quiver(&block_of(&c.anchor), &window, cat, cap) {
                Ok(qv) => arrows_string(&qv.arrows),
                Err(e) => e.to_string(),
            };
            let claim = format!(
                "Ext quiver on λ−kα, k = {}..={}, λ = {}, in {}",
                c.offsets[0],
                c.offsets[c.offsets.len() - 1],
                c.anchor,
                cat.name()
            );
            out.push(Check::new(format!("{}-{}", c.id, cat.name()), claim, arrows_string(&c.arrows), observed));
        }
    }
    out
}

fn duality_checks() -> Vec<Check> {
    let modules: Vec<TruncatedModule> =
        [w((1, 2), 0), Weight::ints(3, 0), Weight::ints(1, 2)].iter().map(|l| verma(l, 5)).collect();
    let bad = modules.iter().filter(|m| m.dualize().character() != m.character()).count();
    vec![Check::new("dual-character", "duality preserves characters", 0, bad)]
}

pub fn run(cap: usize) -> Report {
    let mut checks = algebra_checks();
    checks.extend(module_checks());
    checks.extend(structure_checks());
    checks.extend(ext_checks(cap));
    checks.extend(quiver_checks(cap));
    checks.extend(duality_checks());
    let passed = checks.iter().filter(|c| c.passed).count();
    let failed = checks.len() - passed;
    Report { checks, passed, failed }
}
