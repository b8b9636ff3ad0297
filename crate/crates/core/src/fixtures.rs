//! Small reference inputs shared by tests, benchmarks and the CLI.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::alphabet::Alphabet;
use crate::awa::{Awa, Pcnf};
use crate::formula::{random_nnf_formula, Formula};

/// A formula with the chain of level languages its COCOA must have.
pub struct GoldenChain {
    pub name: &'static str,
    pub formula: &'static str,
    pub aps: &'static [&'static str],
    /// Level `ℓ` (1-based) recognizes `levels[ℓ - 1]`.
    pub levels: &'static [&'static str],
}

pub const GOLDEN_CHAINS: [GoldenChain; 4] = [
    GoldenChain {
        name: "always",
        formula: "G a",
        aps: &["a"],
        levels: &["F !a"],
    },
    GoldenChain {
        name: "persistence",
        formula: "FG a",
        aps: &["a"],
        levels: &["true", "FG a"],
    },
    GoldenChain {
        name: "response implication",
        formula: "GF a -> GF b",
        aps: &["a", "b"],
        levels: &["FG !b", "FG !a & FG !b"],
    },
    GoldenChain {
        name: "four levels",
        formula: "GF a -> (GF b & FG c)",
        aps: &["a", "b", "c"],
        levels: &["true", "FG !a | FG c", "FG c & FG !b", "FG c & FG !b & FG !a"],
    },
];

/// The formula recognized by [`fg_a_or_gf_b_automaton`].
pub const FG_A_OR_GF_B: &str = "FG a | GF b";

/// Hand-built weak alternating automaton for `FG a ∨ GF b` over `{a, b}`.
///
/// States `ι f0 f1 f2 g0 g1 g2` get ids `0..=6`. `f0` waits nondeterministically
/// before moving to `f1`, which checks `G a`; `g0` universally spawns `g1`,
/// which waits for `b`. `f2` is the rejecting sink and `g2` the accepting one.
pub fn fg_a_or_gf_b_automaton() -> Awa {
    let alphabet = Alphabet::full(&["a", "b"]).expect("two propositions");
    let names = ["ι", "f0", "f1", "f2", "g0", "g1", "g2"].map(String::from).to_vec();
    let p = |c: Vec<Vec<u32>>| Pcnf::new(c).expect("non-empty clauses");
    let a = |x: u32| x & 1 != 0;
    let b = |x: u32| x & 2 != 0;
    let row = |f: &dyn Fn(u32) -> Pcnf| alphabet.letters().iter().map(|&x| f(x)).collect::<Vec<_>>();
    let delta = vec![
        row(&|_| p(vec![vec![1, 4]])),
        row(&|_| p(vec![vec![1, 2]])),
        row(&|x| if a(x) { p(vec![vec![2]]) } else { p(vec![vec![3]]) }),
        row(&|_| p(vec![vec![3]])),
        row(&|_| p(vec![vec![4], vec![5]])),
        row(&|x| if b(x) { p(vec![vec![6]]) } else { p(vec![vec![5]]) }),
        row(&|_| p(vec![vec![6]])),
    ];
    let accepting = vec![false, false, true, false, true, false, true];
    Awa::from_parts(alphabet.clone(), names, 0, delta, accepting, 6, 3).expect("well-formed sample automaton")
}

/// Seed of the random formula corpus.
pub const CORPUS_SEED: u64 = 20_240_611;

/// Propositions of the random corpus.
pub const CORPUS_APS: [&str; 2] = ["a", "b"];

/// `count` random NNF formulas of at most `max_size` nodes over
/// [`CORPUS_APS`], reproducible from `seed`.
pub fn random_corpus(seed: u64, count: usize, max_size: usize) -> Vec<Formula> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_nnf_formula(&mut rng, max_size, CORPUS_APS.len()))
        .collect()
}
