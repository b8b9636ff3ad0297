//! A formula family whose chains have a single level with doubly-exponentially
//! many SLTM states.
//!
//! `Ψn` describes words `block* · block · block* · $ · block · #^ω` where a
//! block is `# (a1|b1) ... (an|bn)` and the block after `$` already occurred
//! before it. The family returns `¬Ψn`.

use super::Formula;
use crate::alphabet::Alphabet;
use crate::error::{Error, Result};

/// Proposition order: `a1..an`, `b1..bn`, `hash`, `dollar`.
pub fn lower_bound_aps(n: usize) -> Result<Vec<String>> {
    check(n)?;
    let mut aps: Vec<String> = (1..=n).map(|i| format!("a{i}")).collect();
    aps.extend((1..=n).map(|i| format!("b{i}")));
    aps.push("hash".into());
    aps.push("dollar".into());
    Ok(aps)
}

/// With `singletons`, only letters holding exactly one proposition are kept.
pub fn lower_bound_alphabet(n: usize, singletons: bool) -> Result<Alphabet> {
    let aps = lower_bound_aps(n)?;
    if singletons {
        Alphabet::restricted(&aps, (0..aps.len()).map(|i| 1u32 << i).collect())
    } else {
        Alphabet::full(&aps)
    }
}

fn check(n: usize) -> Result<()> {
    if n < 1 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if 2 * n + 2 > crate::alphabet::MAX_APS {
        return Err(Error::InvalidParameter(format!("n = {n} needs too many propositions")));
    }
    Ok(())
}

/// `¬Ψn` over [`lower_bound_aps`]`(n)`.
pub fn lower_bound_family(n: usize) -> Result<Formula> {
    check(n)?;
    Ok(Formula::not(block_language(n)))
}

fn block_language(n: usize) -> Formula {
    let a = |i: usize| Formula::Atom(i);
    let b = |i: usize| Formula::Atom(n + i);
    let hash = || Formula::Atom(2 * n);
    let dollar = || Formula::Atom(2 * n + 1);
    let slot = |i: usize| Formula::or(a(i), b(i));
    let g = Formula::globally;
    let x = Formula::next;
    let block_start = || Formula::and(hash(), x(slot(0)));

    let mut parts = vec![block_start()];
    for i in 0..n - 1 {
        parts.push(g(Formula::implies(slot(i), x(slot(i + 1)))));
    }
    parts.push(g(Formula::implies(
        slot(n - 1),
        x(Formula::any(vec![block_start(), dollar(), g(hash())])),
    )));
    parts.push(Formula::finally(dollar()));
    parts.push(g(Formula::implies(dollar(), x(g(Formula::not(dollar()))))));
    let mut tail = g(hash());
    for _ in 0..n + 2 {
        tail = x(tail);
    }
    parts.push(g(Formula::implies(dollar(), Formula::and(x(block_start()), tail))));

    let none_of_slots = || Formula::all((0..n).flat_map(|i| [Formula::not(a(i)), Formula::not(b(i))]).collect());
    parts.push(g(Formula::implies(hash(), Formula::and(Formula::not(dollar()), none_of_slots()))));
    parts.push(g(Formula::implies(dollar(), none_of_slots())));
    for i in 0..n {
        parts.push(g(Formula::or(Formula::not(a(i)), Formula::not(b(i)))));
    }
    let mut some = vec![hash(), dollar()];
    some.extend((0..n).map(slot));
    parts.push(g(Formula::any(some)));

    let copied = |s: Formula| Formula::implies(s.clone(), Formula::finally(Formula::and(dollar(), Formula::finally(s))));
    let matches = Formula::all((0..n).flat_map(|i| [copied(a(i)), copied(b(i))]).collect());
    parts.push(Formula::finally(Formula::and(
        hash(),
        x(Formula::and(slot(0), Formula::until(matches, Formula::or(hash(), dollar())))),
    )));
    Formula::all(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::LassoWord;
    use crate::formula::eval_lasso;

    fn word(n: usize, prefix: &str, period: &str) -> LassoWord {
        let aps = lower_bound_aps(n).unwrap();
        let letter = |tok: &str| -> u32 {
            let name = match tok {
                "#" => "hash".to_string(),
                "$" => "dollar".to_string(),
                t => t.to_string(),
            };
            1 << aps.iter().position(|a| *a == name).unwrap()
        };
        let parse = |s: &str| s.split_whitespace().map(letter).collect::<Vec<_>>();
        LassoWord::new(parse(prefix), parse(period)).unwrap()
    }

    fn in_block_language(n: usize, prefix: &str, period: &str) -> bool {
        !eval_lasso(&lower_bound_family(n).unwrap(), &word(n, prefix, period))
    }

    #[test]
    fn rejects_n_zero() {
        assert!(matches!(lower_bound_family(0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn block_words_n1() {
        assert!(in_block_language(1, "# a1 $ # a1", "#"));
        assert!(in_block_language(1, "# b1 # a1 $ # a1", "#"));
        assert!(!in_block_language(1, "# b1 $ # a1", "#"));
        assert!(!in_block_language(1, "# a1 # a1", "#"));
        assert!(!in_block_language(1, "# a1 $ # a1 $", "#"));
        assert!(!in_block_language(1, "$ # a1", "#"));
        assert!(!in_block_language(1, "# a1 $ # a1 #", "a1"));
    }

    #[test]
    fn block_words_n2() {
        assert!(in_block_language(2, "# a1 b2 # b1 b2 $ # b1 b2", "#"));
        assert!(!in_block_language(2, "# a1 b2 # b1 b2 $ # b1 a2", "#"));
        assert!(!in_block_language(2, "# a1 # b1 b2 $ # a1", "#"));
    }

    #[test]
    fn overlapping_letters_are_excluded() {
        let aps = lower_bound_aps(1).unwrap();
        let hash = 1 << 2;
        let a1 = 1;
        let d = 1 << 3;
        let w = LassoWord::new(vec![hash, a1 | hash, d, hash, a1], vec![hash]).unwrap();
        assert_eq!(aps.len(), 4);
        assert!(eval_lasso(&lower_bound_family(1).unwrap(), &w));
    }

    #[test]
    fn size_is_affine() {
        let sizes: Vec<usize> = (1..=5).map(|n| lower_bound_family(n).unwrap().size()).collect();
        let diffs: Vec<usize> = sizes.windows(2).map(|w| w[1] - w[0]).collect();
        assert!(diffs.windows(2).all(|d| d[0] == d[1]), "{sizes:?}");
    }

    #[test]
    fn singleton_alphabet() {
        let a = lower_bound_alphabet(1, true).unwrap();
        assert_eq!(a.len(), 4);
        assert_eq!(lower_bound_alphabet(1, false).unwrap().len(), 16);
    }
}
