//! Digit sums, exact multinomial coefficients, p-adic valuations,
//! residue-class sets, and executable checkers for the two divisibility
//! lemmas that drive the parity arguments.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Sum of the base-`base` digits of `n`. Requires `base >= 2`.
pub fn digit_sum(mut n: u64, base: u64) -> u64 {
    assert!(base >= 2, "digit_sum: base must be at least 2");
    let mut s = 0;
    while n > 0 {
        s += n % base;
        n /= base;
    }
    s
}

/// Exact binomial coefficient `C(n, k)`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Exact multinomial coefficient `k! / (k_1! ... k_n!)`, computed as a
/// product of binomials to avoid giant factorials. Requires `sum(parts) == k`.
pub fn multinomial(k: u64, parts: &[u64]) -> BigInt {
    let total: u64 = parts.iter().sum();
    assert_eq!(total, k, "multinomial: parts must sum to k");
    let mut acc = BigInt::one();
    let mut remaining = k;
    for &part in parts {
        acc *= binomial(remaining, part);
        remaining -= part;
    }
    acc
}

/// Largest `e` with `p^e | n`. Requires `n != 0`; callers treat 0 as
/// divisible by everything.
pub fn padic_valuation(n: &BigInt, p: u64) -> u64 {
    assert!(!n.is_zero(), "padic_valuation: undefined for 0");
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut e = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return e;
        }
        n = q;
        e += 1;
    }
}

/// Outcome of a lemma instance check: either the hypotheses do not hold,
/// or they do and the asserted conclusion was confirmed or refuted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LemmaCheck {
    Vacuous,
    Verified,
    Violated(String),
}

impl LemmaCheck {
    /// True iff the hypotheses of the lemma instance hold.
    pub fn applies(&self) -> bool {
        !matches!(self, LemmaCheck::Vacuous)
    }

    pub fn is_violated(&self) -> bool {
        matches!(self, LemmaCheck::Violated(_))
    }
}

/// Instance check for the criterion "if `p^s | k` and `gcd(k_j, p) = 1`
/// then `p^s` divides the multinomial coefficient of `(k_1, ..., k_n)`".
pub fn check_lemma_31(p: u64, s: u32, parts: &[u64], j: usize) -> LemmaCheck {
    assert!(!parts.is_empty() && j < parts.len());
    let k: u64 = parts.iter().sum();
    let ps = BigInt::from(p).pow(s);
    let hyp = (BigInt::from(k) % &ps).is_zero() && parts[j].gcd(&p) == 1;
    if !hyp {
        return LemmaCheck::Vacuous;
    }
    let m = multinomial(k, parts);
    if (m % &ps).is_zero() {
        LemmaCheck::Verified
    } else {
        LemmaCheck::Violated(format!(
            "{p}^{s} does not divide multinomial({k}, {parts:?})"
        ))
    }
}

/// Instance check for the criterion "if `m >= 1`, `k = sum(ks)` is even,
/// every `l_i` is even, and `sum l_i k_i = 2^(m+1) - 2`, then the
/// multinomial coefficient of `ks` is even". `m >= 1` is part of the
/// hypothesis: it keeps the weighted sum at 2 mod 4, which is what the
/// conclusion rests on.
pub fn check_lemma_32(ls: &[u64], ks: &[u64], m: u32) -> LemmaCheck {
    assert_eq!(ls.len(), ks.len());
    let k: u64 = ks.iter().sum();
    let weighted: u64 = ls.iter().zip(ks).map(|(l, c)| l * c).sum();
    let target = (1u64 << (m + 1)) - 2;
    let hyp = m >= 1 && k % 2 == 0 && ls.iter().all(|l| l % 2 == 0) && weighted == target;
    if !hyp {
        return LemmaCheck::Vacuous;
    }
    if multinomial(k, ks).is_even() {
        LemmaCheck::Verified
    } else {
        LemmaCheck::Violated(format!(
            "multinomial({k}, {ks:?}) is odd with ls={ls:?}, m={m}"
        ))
    }
}

/// The set `{n in N_0 : n = r (mod modulus) for some r in residues}`
/// minus a finite exclusion set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueClassSet {
    modulus: u64,
    residues: BTreeSet<u64>,
    exclusions: BTreeSet<u64>,
}

impl ResidueClassSet {
    pub fn new<I, J>(modulus: u64, residues: I, exclusions: J) -> Self
    where
        I: IntoIterator<Item = u64>,
        J: IntoIterator<Item = u64>,
    {
        assert!(modulus > 0);
        let residues: BTreeSet<u64> = residues.into_iter().collect();
        assert!(!residues.is_empty());
        assert!(residues.iter().all(|&r| r < modulus));
        ResidueClassSet {
            modulus,
            residues,
            exclusions: exclusions.into_iter().collect(),
        }
    }

    pub fn contains(&self, n: u64) -> bool {
        self.residues.contains(&(n % self.modulus)) && !self.exclusions.contains(&n)
    }

    /// Members of the set that are `<= cap`.
    pub fn members_up_to(&self, cap: u64) -> Vec<u64> {
        (0..=cap).filter(|&n| self.contains(n)).collect()
    }
}

impl fmt::Display for ResidueClassSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rs: Vec<String> = self.residues.iter().map(|r| r.to_string()).collect();
        write!(f, "[{}]_{}", rs.join(","), self.modulus)?;
        if !self.exclusions.is_empty() {
            let xs: Vec<String> = self.exclusions.iter().map(|x| x.to_string()).collect();
            write!(f, " \\ {{{}}}", xs.join(","))?;
        }
        Ok(())
    }
}

/// The four parity-constraint index sets A, B, C, D used by the
/// membership characterizations of the cubic generator rows.
pub struct StandardSets {
    pub a: ResidueClassSet,
    pub b: ResidueClassSet,
    pub c: ResidueClassSet,
    pub d: ResidueClassSet,
}

pub fn standard_sets() -> StandardSets {
    StandardSets {
        a: ResidueClassSet::new(24, [15, 21], []),
        b: ResidueClassSet::new(72, [3, 33, 45, 51, 57, 63], [3]),
        c: ResidueClassSet::new(8, [5, 7], []),
        d: ResidueClassSet::new(24, [1, 11, 15, 17, 19, 21], [1]),
    }
}
