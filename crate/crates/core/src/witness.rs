//! Derivation terms as membership certificates.
//!
//! A term over `{0, +, -, compose}` with generator leaves evaluates to a
//! polynomial; a derivation pairs a term with its claimed value and is
//! checked by exact evaluation. The module ships the explicit hand
//! constructions as fixtures, the lifting map that pulls a membership
//! certificate back through a right-composition, and a bounded search
//! that finds certificates mechanically.

use std::collections::HashMap;
use std::error::Error;
use std::fmt;
use std::rc::Rc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero as _};

use crate::IntPoly;

/// Certificate syntax tree. `Gen(k)` references the k-th generator of the
/// evaluation environment; `Identity` is the left identity `x` and is
/// only valid in environments that declare it. Subterms are `Rc`-shared:
/// the hand derivations reuse pieces like `x^2 . x^2 . x^2` heavily.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Zero,
    Gen(usize),
    Identity,
    Add(Rc<Term>, Rc<Term>),
    Sub(Rc<Term>, Rc<Term>),
    Compose(Rc<Term>, Rc<Term>),
}

/// S-expression rendering: atoms `0`, `id`, `gK`; nodes `(add ..)`,
/// `(sub ..)`, `(comp ..)`.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Zero => write!(f, "0"),
            Term::Gen(k) => write!(f, "g{k}"),
            Term::Identity => write!(f, "id"),
            Term::Add(a, b) => write!(f, "(add {a} {b})"),
            Term::Sub(a, b) => write!(f, "(sub {a} {b})"),
            Term::Compose(a, b) => write!(f, "(comp {a} {b})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermParseError {
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for TermParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "term parse error at {}: {}", self.pos, self.msg)
    }
}

impl Error for TermParseError {}

struct TermScanner<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> TermScanner<'a> {
    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn err(&self, msg: &str) -> TermParseError {
        TermParseError { pos: self.pos, msg: msg.into() }
    }

    fn atom(&mut self) -> &'a str {
        let start = self.pos;
        while self
            .src
            .get(self.pos)
            .is_some_and(|c| !c.is_ascii_whitespace() && *c != b'(' && *c != b')')
        {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap()
    }

    fn term(&mut self) -> Result<Rc<Term>, TermParseError> {
        self.skip_ws();
        match self.src.get(self.pos) {
            None => Err(self.err("unexpected end of input")),
            Some(b')') => Err(self.err("unexpected ')'")),
            Some(b'(') => {
                self.pos += 1;
                self.skip_ws();
                let head = self.atom();
                let a = self.term()?;
                let b = self.term()?;
                self.skip_ws();
                if self.src.get(self.pos) != Some(&b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                let node = match head {
                    "add" => Term::Add(a, b),
                    "sub" => Term::Sub(a, b),
                    "comp" => Term::Compose(a, b),
                    other => return Err(self.err(&format!("unknown operator '{other}'"))),
                };
                Ok(Rc::new(node))
            }
            Some(_) => {
                let at = self.pos;
                let atom = self.atom();
                match atom {
                    "0" => Ok(Rc::new(Term::Zero)),
                    "id" => Ok(Rc::new(Term::Identity)),
                    _ => {
                        if let Some(k) = atom.strip_prefix('g') {
                            if let Ok(k) = k.parse::<usize>() {
                                return Ok(Rc::new(Term::Gen(k)));
                            }
                        }
                        Err(TermParseError {
                            pos: at,
                            msg: format!("unknown atom '{atom}'"),
                        })
                    }
                }
            }
        }
    }
}

pub fn parse_term(src: &str) -> Result<Rc<Term>, TermParseError> {
    let mut sc = TermScanner { src: src.as_bytes(), pos: 0 };
    let t = sc.term()?;
    sc.skip_ws();
    if sc.pos != sc.src.len() {
        return Err(sc.err("trailing input"));
    }
    Ok(t)
}

/// Generator bindings for evaluation. `with_identity` additionally binds
/// the `id` leaf to the left identity `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Environment {
    pub generators: Vec<IntPoly>,
    pub has_identity: bool,
}

impl Environment {
    pub fn new(generators: Vec<IntPoly>) -> Self {
        Environment { generators, has_identity: false }
    }

    pub fn with_identity(generators: Vec<IntPoly>) -> Self {
        Environment { generators, has_identity: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalError {
    UnresolvedLabel { label: usize, env_size: usize },
    IdentityUndeclared,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::UnresolvedLabel { label, env_size } => {
                write!(f, "generator g{label} not bound (environment has {env_size})")
            }
            EvalError::IdentityUndeclared => {
                write!(f, "'id' leaf used without a declared left identity")
            }
        }
    }
}

impl Error for EvalError {}

fn eval_memo(
    t: &Rc<Term>,
    env: &Environment,
    memo: &mut HashMap<*const Term, IntPoly>,
) -> Result<IntPoly, EvalError> {
    let key = Rc::as_ptr(t);
    if let Some(v) = memo.get(&key) {
        return Ok(v.clone());
    }
    let v = match t.as_ref() {
        Term::Zero => IntPoly::zero(),
        Term::Identity => {
            if !env.has_identity {
                return Err(EvalError::IdentityUndeclared);
            }
            IntPoly::x()
        }
        Term::Gen(k) => env
            .generators
            .get(*k)
            .cloned()
            .ok_or(EvalError::UnresolvedLabel { label: *k, env_size: env.generators.len() })?,
        Term::Add(a, b) => &eval_memo(a, env, memo)? + &eval_memo(b, env, memo)?,
        Term::Sub(a, b) => &eval_memo(a, env, memo)? - &eval_memo(b, env, memo)?,
        Term::Compose(a, b) => eval_memo(a, env, memo)?.compose(&eval_memo(b, env, memo)?),
    };
    memo.insert(key, v.clone());
    Ok(v)
}

/// Evaluates a term under the environment. Shared subterms are evaluated
/// once (memoized by node identity).
pub fn eval_term(t: &Rc<Term>, env: &Environment) -> Result<IntPoly, EvalError> {
    eval_memo(t, env, &mut HashMap::new())
}

/// A named membership certificate: `term` over `environment` claims to
/// evaluate to `claimed_value`.
#[derive(Clone, Debug)]
pub struct Derivation {
    pub name: String,
    pub term: Rc<Term>,
    pub environment: Environment,
    pub claimed_value: IntPoly,
}

pub fn verify_derivation(d: &Derivation) -> bool {
    eval_term(&d.term, &d.environment).is_ok_and(|v| v == d.claimed_value)
}

fn add(a: &Rc<Term>, b: &Rc<Term>) -> Rc<Term> {
    Rc::new(Term::Add(a.clone(), b.clone()))
}

fn sub(a: &Rc<Term>, b: &Rc<Term>) -> Rc<Term> {
    Rc::new(Term::Sub(a.clone(), b.clone()))
}

fn comp(a: &Rc<Term>, b: &Rc<Term>) -> Rc<Term> {
    Rc::new(Term::Compose(a.clone(), b.clone()))
}

fn gen(k: usize) -> Rc<Term> {
    Rc::new(Term::Gen(k))
}

/// `n * t` as a term, by binary doubling; `n` may be negative.
pub fn scalar_mul_term(n: &BigInt, t: &Rc<Term>) -> Rc<Term> {
    if n.is_zero() {
        return Rc::new(Term::Zero);
    }
    if n.is_negative() {
        return Rc::new(Term::Sub(Rc::new(Term::Zero), scalar_mul_term(&-n, t)));
    }
    if n.is_one() {
        return t.clone();
    }
    let half = scalar_mul_term(&(n >> 1), t);
    let doubled = add(&half, &half);
    if n.is_odd() {
        add(&doubled, t)
    } else {
        doubled
    }
}

fn nat_mul(n: u32, t: &Rc<Term>) -> Rc<Term> {
    scalar_mul_term(&BigInt::from(n), t)
}

/// The explicit constructive identities, as verifying derivations:
/// the introductory 2x^10 identity over {x^2}; the x^5..x^13 chain and
/// the induction-step instance for <x^2,x^3>; the x^5 construction for
/// <x,x^2,x^3>; and the 3p*x^(2*3^a) + 3p^2*x^(3^a) family over {x^3}.
pub fn builtin_derivations() -> Vec<Derivation> {
    let mut out = Vec::new();
    let mono = |c: i64, d: usize| IntPoly::monomial(BigInt::from(c), d);

    // over {x^2}: x^2 . (x^2 + x^2.x^2.x^2) - x^2.x^2 - x^2.x^2.x^2.x^2
    {
        let g0 = gen(0);
        let x8 = comp(&g0, &comp(&g0, &g0));
        let t = sub(
            &sub(&comp(&g0, &add(&g0, &x8)), &comp(&g0, &g0)),
            &comp(&g0, &x8),
        );
        out.push(Derivation {
            name: "sec1-2x10".into(),
            term: t,
            environment: Environment::new(vec!["x^2".parse().unwrap()]),
            claimed_value: mono(2, 10),
        });
    }

    // over {x^2, x^3}: the chain establishing x^i for i >= 6 plus 2x^5
    {
        let env = Environment::new(vec!["x^2".parse().unwrap(), "x^3".parse().unwrap()]);
        let g0 = gen(0);
        let g1 = gen(1);
        let x4 = comp(&g0, &g0);
        let x6 = comp(&g0, &g1);
        let x8 = comp(&g0, &x4);
        let x9 = comp(&g1, &g1);
        let x12 = comp(&g1, &x4);
        // x^2 . (x^2 + x^3) - x^4 - x^2 . x^3
        let t2x5 = sub(&sub(&comp(&g0, &add(&g0, &g1)), &x4), &x6);
        // x^2.(x^2 + 2x^5) - x^4 - x^2.(2x^5) - (x^3.(x^2+x^3) - x^6 - x^3.x^3 - 3x^8)
        let x7 = sub(
            &sub(&sub(&comp(&g0, &add(&g0, &t2x5)), &x4), &comp(&g0, &t2x5)),
            &sub(
                &sub(&sub(&comp(&g1, &add(&g0, &g1)), &x6), &x9),
                &nat_mul(3, &x8),
            ),
        );
        // x^2.(2x^5) - (x^3.(x^2+x^4) - x^6 - 3x^8 - x^3.x^4)
        let x10 = sub(
            &comp(&g0, &t2x5),
            &sub(
                &sub(&sub(&comp(&g1, &add(&g0, &x4)), &x6), &nat_mul(3, &x8)),
                &x12,
            ),
        );
        // x^3.(x^3+x^4) - x^9 - 3x^10 - x^3.x^4 - (x^2.(x^7+x^4) - x^2.x^7 - x^8)
        let x11 = sub(
            &sub(
                &sub(&sub(&comp(&g1, &add(&g1, &x4)), &x9), &nat_mul(3, &x10)),
                &x12,
            ),
            &sub(&sub(&comp(&g0, &add(&x7, &x4)), &comp(&g0, &x7)), &x8),
        );
        // x^3.(x^4+x^9) - x^12 - 3*(x^2.x^11) - x^3.x^9
        let t3x17 = sub(
            &sub(
                &sub(&comp(&g1, &add(&x4, &x9)), &x12),
                &nat_mul(3, &comp(&g0, &x11)),
            ),
            &comp(&g1, &x9),
        );
        // x^3.(x^3+x^7) - x^9 - 3x^17 - x^3.x^7 - (x^2.(x^2+x^11) - x^4 - x^2.x^11)
        let x13 = sub(
            &sub(
                &sub(&sub(&comp(&g1, &add(&g1, &x7)), &x9), &t3x17),
                &comp(&g1, &x7),
            ),
            &sub(
                &sub(&comp(&g0, &add(&g0, &x11)), &x4),
                &comp(&g0, &x11),
            ),
        );
        let fixtures: [(&str, &Rc<Term>, IntPoly); 10] = [
            ("thm-x2x3-2x5", &t2x5, mono(2, 5)),
            ("thm-x2x3-x6", &x6, mono(1, 6)),
            ("thm-x2x3-x7", &x7, mono(1, 7)),
            ("thm-x2x3-x8", &x8, mono(1, 8)),
            ("thm-x2x3-x9", &x9, mono(1, 9)),
            ("thm-x2x3-x10", &x10, mono(1, 10)),
            ("thm-x2x3-x11", &x11, mono(1, 11)),
            ("thm-x2x3-x12", &x12, mono(1, 12)),
            ("thm-x2x3-3x17", &t3x17, mono(3, 17)),
            ("thm-x2x3-x13", &x13, mono(1, 13)),
        ];
        for (name, term, value) in fixtures {
            out.push(Derivation {
                name: name.into(),
                term: term.clone(),
                environment: env.clone(),
                claimed_value: value,
            });
        }

        // induction step at (j1, j2) = (6, 2):
        //   3x^14 = x^3.(x^6+x^2) - x^3.x^2 - x^3.x^6 - 3x^10
        //   2x^14 = x^2.(x^12+x^2) - x^2.x^12 - x^2.x^2
        let eq51 = sub(
            &sub(
                &sub(&comp(&g1, &add(&x6, &g0)), &comp(&g1, &g0)),
                &comp(&g1, &x6),
            ),
            &nat_mul(3, &x10),
        );
        let eq52 = sub(
            &sub(&comp(&g0, &add(&x12, &g0)), &comp(&g0, &x12)),
            &x4,
        );
        out.push(Derivation {
            name: "thm-x2x3-ind-x14".into(),
            term: sub(&eq51, &eq52),
            environment: env,
            claimed_value: mono(1, 14),
        });
    }

    // over {x, x^2, x^3}:
    // x^3.(x+x^2) - x^3 - x^3.x^2 - 3*(x^2.x^2) - (x^2.(x^2+x^3) - x^4 - x^2.x^3)
    {
        let g0 = gen(0);
        let g1 = gen(1);
        let g2 = gen(2);
        let x4 = comp(&g1, &g1);
        let t = sub(
            &sub(
                &sub(&sub(&comp(&g2, &add(&g0, &g1)), &g2), &comp(&g2, &g1)),
                &nat_mul(3, &x4),
            ),
            &sub(&sub(&comp(&g1, &add(&g1, &g2)), &x4), &comp(&g1, &g2)),
        );
        out.push(Derivation {
            name: "thm-xx2x3-x5".into(),
            term: t,
            environment: Environment::new(vec![
                "x".parse().unwrap(),
                "x^2".parse().unwrap(),
                "x^3".parse().unwrap(),
            ]),
            claimed_value: mono(1, 5),
        });
    }

    // over {x^3}: base(p, a) = x^3.(p + x^(3^a)) - x^3.p - x^(3^(a+1))
    //                        = 3p*x^(2*3^a) + 3p^2*x^(3^a)
    {
        let g0 = gen(0);
        let pow3 = |a: u32| -> Rc<Term> {
            let mut t = g0.clone();
            for _ in 1..a {
                t = comp(&g0, &t);
            }
            t
        };
        let base = |p: &Rc<Term>, a: u32| -> Rc<Term> {
            sub(
                &sub(&comp(&g0, &add(p, &pow3(a))), &comp(&g0, p)),
                &pow3(a + 1),
            )
        };
        let neg = |p: &Rc<Term>| sub(&Rc::new(Term::Zero), p);
        // base(-p, a) flips the sign of the first summand only
        let six_first = |p: &Rc<Term>, a: u32| sub(&base(p, a), &base(&neg(p), a));
        let six_second = |p: &Rc<Term>, a: u32| add(&base(p, a), &base(&neg(p), a));
        let env = Environment::new(vec!["x^3".parse().unwrap()]);
        let x3 = pow3(1);
        let x9 = pow3(2);
        let fixtures: [(&str, Rc<Term>, IntPoly); 7] = [
            ("lem-x3-3x21p3x15", base(&x3, 2), &mono(3, 21) + &mono(3, 15)),
            ("lem-x3-6x15", six_second(&x3, 2), mono(6, 15)),
            ("lem-x3-3x57p3x33", base(&x3, 3), &mono(3, 57) + &mono(3, 33)),
            ("lem-x3-6x33", six_second(&x3, 3), mono(6, 33)),
            ("lem-x3-3x63p3x45", base(&x9, 3), &mono(3, 63) + &mono(3, 45)),
            ("lem-x3-6x45", six_second(&x9, 3), mono(6, 45)),
            ("lem-x3-6x63", six_first(&x9, 3), mono(6, 63)),
        ];
        for (name, term, value) in fixtures {
            out.push(Derivation {
                name: name.into(),
                term,
                environment: env.clone(),
                claimed_value: value,
            });
        }
    }

    debug_assert!(out.iter().all(verify_derivation));
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftError;

impl fmt::Display for LiftError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "lift input already contains an 'id' leaf")
    }
}

impl Error for LiftError {}

/// The lifting map `R`: given a certificate for `t` over generators
/// `{a, c_1, ..., c_k}` where `g0 = a` is right cancellable and the
/// remaining generators are constants, `R(t)` satisfies
/// `eval(R(t)) . a = eval(t)` once the environment declares the left
/// identity. Rules: `R(g0) = id`, constants are fixed, `R(t1 . t2) =
/// t1 . R(t2)`, `R` commutes with `+`, `-`, and `0`.
pub fn lift_witness(t: &Rc<Term>) -> Result<Rc<Term>, LiftError> {
    match t.as_ref() {
        Term::Zero => Ok(Rc::new(Term::Zero)),
        Term::Identity => Err(LiftError),
        Term::Gen(0) => Ok(Rc::new(Term::Identity)),
        Term::Gen(_) => Ok(t.clone()),
        Term::Add(a, b) => Ok(Rc::new(Term::Add(lift_witness(a)?, lift_witness(b)?))),
        Term::Sub(a, b) => Ok(Rc::new(Term::Sub(lift_witness(a)?, lift_witness(b)?))),
        Term::Compose(a, b) => {
            // left factor is kept, so it must itself be id-free
            if contains_identity(a) {
                return Err(LiftError);
            }
            Ok(Rc::new(Term::Compose(a.clone(), lift_witness(b)?)))
        }
    }
}

fn contains_identity(t: &Rc<Term>) -> bool {
    match t.as_ref() {
        Term::Identity => true,
        Term::Zero | Term::Gen(_) => false,
        Term::Add(a, b) | Term::Sub(a, b) | Term::Compose(a, b) => {
            contains_identity(a) || contains_identity(b)
        }
    }
}

/// Enumeration bounds for `search_witness`: `max_depth` caps the number
/// of saturation rounds (each round composes generators onto sums built
/// from earlier finds), `coeff_cap` bounds the integer coefficients of
/// those sums.
#[derive(Clone, Copy, Debug)]
pub struct SearchBounds {
    pub max_depth: usize,
    pub coeff_cap: i64,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds { max_depth: 8, coeff_cap: 3 }
    }
}

/// An echelon basis whose rows carry the term that evaluates to them.
/// Row operations mirror `lattice::echelon_insert` with terms combined
/// alongside the vectors, so every row stays certified.
struct TrackedLattice {
    dims: usize,
    slots: Vec<Option<(Vec<BigInt>, Rc<Term>)>>,
}

impl TrackedLattice {
    fn new(dims: usize) -> Self {
        TrackedLattice { dims, slots: vec![None; dims] }
    }

    fn rows(&self) -> impl Iterator<Item = &(Vec<BigInt>, Rc<Term>)> {
        self.slots.iter().flatten()
    }

    fn insert(&mut self, mut v: Vec<BigInt>, mut t: Rc<Term>) -> bool {
        assert_eq!(v.len(), self.dims);
        let mut grew = false;
        while let Some(p) = v.iter().position(|c| !c.is_zero()) {
            match self.slots[p].take() {
                None => {
                    if v[p].is_negative() {
                        for c in &mut v {
                            *c = -std::mem::take(c);
                        }
                        t = sub(&Rc::new(Term::Zero), &t);
                    }
                    self.slots[p] = Some((v, t));
                    return true;
                }
                Some((r, rt)) => {
                    let (q, rem) = v[p].div_rem(&r[p]);
                    if rem.is_zero() {
                        for (a, b) in v.iter_mut().zip(&r) {
                            *a -= &q * b;
                        }
                        t = sub(&t, &scalar_mul_term(&q, &rt));
                        self.slots[p] = Some((r, rt));
                    } else {
                        grew = true;
                        let e = r[p].extended_gcd(&v[p]);
                        let combined: Vec<BigInt> = r
                            .iter()
                            .zip(&v)
                            .map(|(a, b)| &e.x * a + &e.y * b)
                            .collect();
                        let ct = add(&scalar_mul_term(&e.x, &rt), &scalar_mul_term(&e.y, &t));
                        let cr = &r[p] / &e.gcd;
                        let cv = &v[p] / &e.gcd;
                        let spill: Vec<BigInt> = r
                            .iter()
                            .zip(&v)
                            .map(|(a, b)| &cr * b - &cv * a)
                            .collect();
                        let st = sub(&scalar_mul_term(&cr, &t), &scalar_mul_term(&cv, &rt));
                        self.slots[p] = Some((combined, ct));
                        v = spill;
                        t = st;
                    }
                }
            }
        }
        grew
    }

    fn contains(&self, v: &[BigInt]) -> bool {
        self.solve(v).is_some() || v.iter().all(|c| c.is_zero())
    }

    /// Expresses `v` over the rows, returning the certifying term.
    fn solve(&self, v: &[BigInt]) -> Option<Rc<Term>> {
        let mut v = v.to_vec();
        let mut acc = Rc::new(Term::Zero);
        let mut used = false;
        for (r, rt) in self.rows() {
            let p = r.iter().position(|c| !c.is_zero()).unwrap();
            if v[p].is_zero() {
                continue;
            }
            let (q, rem) = v[p].div_rem(&r[p]);
            if !rem.is_zero() {
                return None;
            }
            for (a, b) in v.iter_mut().zip(r) {
                *a -= &q * b;
            }
            let scaled = scalar_mul_term(&q, rt);
            acc = if used { add(&acc, &scaled) } else { scaled };
            used = true;
        }
        (v.iter().all(|c| c.is_zero()) && used).then_some(acc)
    }
}

/// Bounded certificate search: saturates the span of the generators
/// under sums, differences, and left composition by generators, carrying
/// a term for every basis row, and stops as soon as `target` is solvable
/// over the tracked rows. A returned term always verifies; exhaustion
/// proves nothing about non-membership.
pub fn search_witness(
    target: &IntPoly,
    generators: &[IntPoly],
    bounds: SearchBounds,
) -> Option<Rc<Term>> {
    let tdeg = target.degree()?;
    let work = (2 * tdeg + 4).max(
        generators
            .iter()
            .filter_map(|g| g.degree())
            .max()
            .unwrap_or(0),
    );
    let dims = work + 1;
    let mut lat = TrackedLattice::new(dims);
    let gen_terms: Vec<Rc<Term>> = (0..generators.len()).map(gen).collect();
    for (k, g) in generators.iter().enumerate() {
        if g.degree().is_some_and(|d| d <= work) {
            lat.insert(g.coeff_vec(work), gen_terms[k].clone());
        }
    }
    let target_vec = target.coeff_vec(work);
    let mut expanded: std::collections::HashSet<u64> = std::collections::HashSet::new();
    let vec_hash = |v: &IntPoly| -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        v.coeff_vec(work).hash(&mut h);
        h.finish()
    };
    let composers: Vec<usize> = generators
        .iter()
        .enumerate()
        .filter(|(_, g)| g.degree().is_some_and(|d| (1..=work).contains(&d)))
        .map(|(k, _)| k)
        .collect();

    for _ in 0..bounds.max_depth {
        if let Some(t) = lat.solve(&target_vec) {
            debug_assert_eq!(
                eval_term(&t, &Environment::new(generators.to_vec())).unwrap(),
                *target
            );
            return Some(t);
        }
        let rows: Vec<(IntPoly, Rc<Term>)> = lat
            .rows()
            .map(|(v, t)| (IntPoly::from_coeff_vec(v), t.clone()))
            .collect();
        let mut grew = false;
        // sums of at most 3 rows, coefficients in [-cap, cap] \ {0}
        let mut stack: Vec<(usize, IntPoly, Rc<Term>, usize)> = Vec::new();
        for i in 0..rows.len() {
            for lambda in -bounds.coeff_cap..=bounds.coeff_cap {
                if lambda == 0 {
                    continue;
                }
                let c = BigInt::from(lambda);
                stack.push((
                    i + 1,
                    rows[i].0.scale(&c),
                    scalar_mul_term(&c, &rows[i].1),
                    1,
                ));
            }
        }
        while let Some((from, q, qt, picks)) = stack.pop() {
            if expanded.insert(vec_hash(&q)) {
                let qdeg = q.degree().unwrap_or(0).max(1);
                for &k in &composers {
                    let g = &generators[k];
                    if g.degree().unwrap() * qdeg > work {
                        continue;
                    }
                    let r = g.compose(&q);
                    if r.degree().is_none_or(|d| d > work) {
                        continue;
                    }
                    let v = r.coeff_vec(work);
                    if !lat.contains(&v) {
                        grew |= lat.insert(v, comp(&gen_terms[k], &qt));
                    }
                }
            }
            if picks < 3 {
                for i in from..rows.len() {
                    for lambda in -bounds.coeff_cap..=bounds.coeff_cap {
                        if lambda == 0 {
                            continue;
                        }
                        let c = BigInt::from(lambda);
                        stack.push((
                            i + 1,
                            &q + &rows[i].0.scale(&c),
                            add(&qt, &scalar_mul_term(&c, &rows[i].1)),
                            picks + 1,
                        ));
                    }
                }
            }
        }
        if !grew {
            break;
        }
    }
    lat.solve(&target_vec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> IntPoly {
        s.parse().unwrap()
    }

    #[test]
    fn eval_basics() {
        let env = Environment::new(vec![p("x^3")]);
        assert_eq!(eval_term(&Rc::new(Term::Zero), &env).unwrap(), IntPoly::zero());
        let env_id = Environment::with_identity(vec![p("x^3")]);
        let t = comp(&Rc::new(Term::Identity), &gen(0));
        assert_eq!(eval_term(&t, &env_id).unwrap(), p("x^3"));
        assert_eq!(
            eval_term(&t, &env),
            Err(EvalError::IdentityUndeclared)
        );
        assert!(matches!(
            eval_term(&gen(1), &env),
            Err(EvalError::UnresolvedLabel { .. })
        ));
    }

    #[test]
    fn builtin_fixtures_verify() {
        let all = builtin_derivations();
        assert!(all.len() >= 15);
        for d in &all {
            assert!(verify_derivation(d), "fixture {} failed", d.name);
        }
    }

    #[test]
    fn tampered_claim_fails() {
        let mut d = builtin_derivations().into_iter().next().unwrap();
        assert_eq!(d.name, "sec1-2x10");
        assert_eq!(d.claimed_value, p("2x^10"));
        d.claimed_value = p("x^10");
        assert!(!verify_derivation(&d));
    }

    #[test]
    fn serialization_round_trip() {
        for d in builtin_derivations() {
            let text = d.term.to_string();
            let back = parse_term(&text).unwrap();
            assert_eq!(*back, *d.term, "round trip failed for {}", d.name);
        }
        let t = parse_term("(sub (comp g0 (add g0 (comp g0 (comp g0 g0)))) (add (comp g0 g0) (comp g0 (comp g0 (comp g0 g0)))))").unwrap();
        let env = Environment::new(vec![p("x^2")]);
        assert_eq!(eval_term(&t, &env).unwrap(), p("2x^10"));
    }

    #[test]
    fn parse_errors() {
        assert!(parse_term("(mul g0 g0)").is_err());
        assert!(parse_term("(add g0").is_err());
        assert!(parse_term("g0 g1").is_err());
        assert!(parse_term("gx").is_err());
    }

    #[test]
    fn lift_examples() {
        // R(X) = Z: with a = x^2, eval(Z) . a = x . x^2 = x^2 = eval(X)
        let a = p("x^2");
        let x = gen(0);
        let lifted = lift_witness(&x).unwrap();
        assert_eq!(*lifted, Term::Identity);
        let env = Environment::with_identity(vec![a.clone()]);
        assert_eq!(eval_term(&lifted, &env).unwrap().compose(&a), a);

        // R(X . X) = X . Z
        let xx = comp(&x, &x);
        let lifted = lift_witness(&xx).unwrap();
        assert_eq!(
            eval_term(&lifted, &env).unwrap().compose(&a),
            eval_term(&xx, &env).unwrap()
        );

        assert_eq!(*lift_witness(&Rc::new(Term::Zero)).unwrap(), Term::Zero);
        assert_eq!(lift_witness(&Rc::new(Term::Identity)), Err(LiftError));
    }

    #[test]
    fn lift_round_trip_on_builtins() {
        // single-generator fixtures with a = g0 cancellable
        for d in builtin_derivations() {
            if d.environment.generators.len() != 1 {
                continue;
            }
            let a = &d.environment.generators[0];
            let lifted = lift_witness(&d.term).unwrap();
            let env = Environment::with_identity(d.environment.generators.clone());
            assert_eq!(
                eval_term(&lifted, &env).unwrap().compose(a),
                d.claimed_value,
                "round trip failed for {}",
                d.name
            );
        }
    }

    #[test]
    fn search_finds_trivial_and_easy_targets() {
        let t = search_witness(&p("x^3"), &[p("x^3")], SearchBounds::default()).unwrap();
        assert_eq!(
            eval_term(&t, &Environment::new(vec![p("x^3")])).unwrap(),
            p("x^3")
        );
        let gens = [p("x^2"), p("x^3")];
        let t = search_witness(&p("2x^5"), &gens, SearchBounds::default()).unwrap();
        assert_eq!(
            eval_term(&t, &Environment::new(gens.to_vec())).unwrap(),
            p("2x^5")
        );
    }

    #[test]
    fn search_misses_non_member() {
        assert!(search_witness(&p("x^5"), &[p("x^2"), p("x^3")], SearchBounds::default()).is_none());
    }

    #[test]
    fn search_result_verifies_midrange() {
        let gens = [p("x^2"), p("x^3")];
        let t = search_witness(&p("x^7"), &gens, SearchBounds::default()).unwrap();
        assert_eq!(
            eval_term(&t, &Environment::new(gens.to_vec())).unwrap(),
            p("x^7")
        );
    }
}
