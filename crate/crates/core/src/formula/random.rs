use rand::Rng;

use super::Formula;

/// A random formula of at most `max_size` nodes over atoms `0..aps`,
/// returned in NNF (constants only at the root).
pub fn random_nnf_formula<R: Rng>(rng: &mut R, max_size: usize, aps: usize) -> Formula {
    let size = rng.gen_range(1..=max_size.max(1));
    grow(rng, size, aps.max(1)).to_nnf()
}

fn grow<R: Rng>(rng: &mut R, size: usize, aps: usize) -> Formula {
    if size <= 1 {
        let i = rng.gen_range(0..aps);
        return if rng.gen_bool(0.5) { Formula::Atom(i) } else { Formula::NegAtom(i) };
    }
    if size == 2 || rng.gen_bool(0.35) {
        let inner = grow(rng, size - 1, aps);
        return match rng.gen_range(0..3) {
            0 => Formula::next(inner),
            1 => Formula::finally(inner),
            _ => Formula::globally(inner),
        };
    }
    let left = rng.gen_range(1..size - 1);
    let a = grow(rng, left, aps);
    let b = grow(rng, size - 1 - left, aps);
    match rng.gen_range(0..4) {
        0 => Formula::and(a, b),
        1 => Formula::or(a, b),
        2 => Formula::until(a, b),
        _ => Formula::release(a, b),
    }
}
