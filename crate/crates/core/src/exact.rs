//! Exact integer and rational arithmetic, and the number-theoretic kernels
//! consumed by every other module: l-adic valuations, Legendre and Kronecker
//! symbols, local Hilbert symbols and square-free decomposition.
//!
//! Integers and rationals are arbitrary-precision; rationals are always
//! stored in lowest terms with a positive denominator (this is what
//! `num_rational::BigRational` guarantees on construction), so equality is
//! exact structural equality everywhere.

use num_bigint::{BigInt, Sign};
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

pub type Integer = BigInt;
pub type Rational = num_rational::BigRational;

/// l-adic valuation of a rational number. `Infinite` is the valuation of 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

/// A place of Q: a finite prime or the archimedean place.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Place {
    Finite(Integer),
    Infinity,
}

pub fn int(n: i64) -> Integer {
    Integer::from(n)
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(Integer::from(n), Integer::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(Integer::from(n))
}

/// p^k for a possibly negative exponent k.
pub fn pow_p(p: u64, k: i64) -> Rational {
    let base = Integer::from(p);
    if k >= 0 {
        Rational::from_integer(base.pow(k as u32))
    } else {
        Rational::new(Integer::one(), base.pow((-k) as u32))
    }
}

fn mulmod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc: u64 = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod_u64(acc, base, m);
        }
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    // This witness set is deterministic for all n < 3.3 * 10^24.
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Deterministic primality test. Inputs of 64 bits or less only; larger
/// moduli are rejected rather than tested probabilistically.
pub fn is_prime(n: &Integer) -> Result<bool> {
    if n.sign() == Sign::Minus {
        return Ok(false);
    }
    match n.to_u64() {
        Some(v) => Ok(is_prime_u64(v)),
        None => Err(Error::PrimeTooLarge(n.to_string())),
    }
}

pub fn check_prime(n: &Integer) -> Result<()> {
    if is_prime(n)? {
        Ok(())
    } else {
        Err(Error::NotPrime(n.to_string()))
    }
}

/// Valuation and cofactor: n = l^v * u with l not dividing u. Requires n != 0.
pub fn split_valuation(n: &Integer, l: &Integer) -> (i64, Integer) {
    debug_assert!(!n.is_zero());
    let mut v = 0i64;
    let mut u = n.clone();
    loop {
        let (q, r) = u.div_rem(l);
        if r.is_zero() {
            v += 1;
            u = q;
        } else {
            return (v, u);
        }
    }
}

/// v_l(x) for a rational x; the valuation of 0 is `Infinite`.
pub fn valuation(x: &Rational, l: &Integer) -> Result<Valuation> {
    check_prime(l)?;
    if x.is_zero() {
        return Ok(Valuation::Infinite);
    }
    let (vn, _) = split_valuation(x.numer(), l);
    let (vd, _) = split_valuation(x.denom(), l);
    Ok(Valuation::Finite(vn - vd))
}

/// The unit part of a nonzero rational at l: x / l^{v_l(x)}.
pub fn unit_part(x: &Rational, l: &Integer) -> Rational {
    debug_assert!(!x.is_zero());
    let (vn, un) = split_valuation(x.numer(), l);
    let (vd, ud) = split_valuation(x.denom(), l);
    let _ = vn - vd;
    Rational::new(un, ud)
}

/// Legendre symbol (a | l) for an odd prime l, via Euler's criterion.
pub fn legendre(a: &Integer, l: &Integer) -> Result<i32> {
    check_prime(l)?;
    if l == &int(2) {
        return Err(Error::EvenPrime);
    }
    let a_mod = a.mod_floor(l);
    if a_mod.is_zero() {
        return Ok(0);
    }
    let e = (l - 1u32) / 2u32;
    let r = a_mod.modpow(&e, l);
    if r.is_one() {
        Ok(1)
    } else {
        Ok(-1)
    }
}

/// Legendre symbol of a rational unit at an odd prime l: since (d^2 | l) = 1,
/// (n/d | l) = (n*d | l).
pub fn legendre_unit(x: &Rational, l: &Integer) -> Result<i32> {
    legendre(&(x.numer() * x.denom()), l)
}

/// Kronecker symbol (a | l) at a prime l, including l = 2, where
/// (a | 2) = 0 for even a and (-1)^((a^2-1)/8) for odd a.
pub fn kronecker_at_prime(a: &Integer, l: &Integer) -> Result<i32> {
    check_prime(l)?;
    if l == &int(2) {
        if a.is_even() {
            return Ok(0);
        }
        let r = a.mod_floor(&int(8)).to_i64().unwrap();
        return Ok(if r == 1 || r == 7 { 1 } else { -1 });
    }
    legendre(a, l)
}

fn residue_mod_pow2(x: &Rational, modulus: i64) -> i64 {
    // For odd d, d^{-1} = d (mod 8), so n/d = n*d (mod 8) and (mod 4).
    let m = int(modulus);
    let n = x.numer().mod_floor(&m);
    let d = x.denom().mod_floor(&m);
    (n * d).mod_floor(&m).to_i64().unwrap()
}

/// Local Hilbert symbol (a, b)_v in {-1, 1}. Both arguments must be nonzero.
///
/// At an odd prime p, writing a = p^alpha u and b = p^beta w,
/// (a,b)_p = (-1)^(alpha beta (p-1)/2) (u|p)^beta (w|p)^alpha.
/// At p = 2, (a,b)_2 = (-1)^(eps(u)eps(w) + alpha omega(w) + beta omega(u))
/// with eps(u) = (u-1)/2 and omega(u) = (u^2-1)/8 taken mod 2.
/// At infinity, (a,b) = -1 exactly when a < 0 and b < 0.
pub fn hilbert_symbol(a: &Rational, b: &Rational, place: &Place) -> Result<i32> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroArgument);
    }
    match place {
        Place::Infinity => Ok(if a.is_negative() && b.is_negative() {
            -1
        } else {
            1
        }),
        Place::Finite(l) => {
            check_prime(l)?;
            let va = valuation(a, l)?.finite().unwrap();
            let vb = valuation(b, l)?.finite().unwrap();
            let u = unit_part(a, l);
            let w = unit_part(b, l);
            if l == &int(2) {
                let eps_u = (residue_mod_pow2(&u, 4) - 1) / 2;
                let eps_w = (residue_mod_pow2(&w, 4) - 1) / 2;
                let omega = |r: i64| i64::from(r == 3 || r == 5);
                let om_u = omega(residue_mod_pow2(&u, 8));
                let om_w = omega(residue_mod_pow2(&w, 8));
                let e = eps_u * eps_w + va * om_w + vb * om_u;
                Ok(if e % 2 == 0 { 1 } else { -1 })
            } else {
                let mut s = 1i32;
                if (va * vb) % 2 != 0 && (l - 1u32).mod_floor(&int(4)) == int(2) {
                    // (-1 | l) = -1 exactly for l = 3 (mod 4)
                    s = -s;
                }
                if vb % 2 != 0 {
                    s *= legendre_unit(&u, l)?;
                }
                if va % 2 != 0 {
                    s *= legendre_unit(&w, l)?;
                }
                Ok(s)
            }
        }
    }
}

/// The finite primes that can carry a nontrivial Hilbert symbol (a, b)_l:
/// 2 together with the primes dividing the numerator or denominator of a or b.
pub fn hilbert_support(a: &Rational, b: &Rational) -> Result<Vec<Integer>> {
    let mut primes = vec![int(2)];
    for x in [a, b] {
        for n in [x.numer(), x.denom()] {
            if n.is_zero() {
                continue;
            }
            for (p, _) in factor(&n.abs())? {
                if !primes.contains(&p) {
                    primes.push(p);
                }
            }
        }
    }
    primes.sort();
    Ok(primes)
}

/// Factor a positive integer into (prime, exponent) pairs, primes ascending.
///
/// Trial division by small primes, then Brent's variant of Pollard's rho on
/// 64-bit cofactors. Cofactors beyond 64 bits are rejected; cryptographic-size
/// factorization is out of scope.
pub fn factor(n: &Integer) -> Result<Vec<(Integer, u32)>> {
    if n.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let mut m = n.abs();
    let mut out: Vec<(Integer, u32)> = Vec::new();
    let push = |p: Integer, out: &mut Vec<(Integer, u32)>| {
        if let Some(last) = out.last_mut() {
            if last.0 == p {
                last.1 += 1;
                return;
            }
        }
        out.push((p, 1));
    };
    for small in 2u64..1000 {
        if m.is_one() {
            break;
        }
        let sp = int(small as i64);
        while (&m % &sp).is_zero() {
            m /= &sp;
            push(sp.clone(), &mut out);
        }
    }
    if !m.is_one() {
        let v = m
            .to_u64()
            .ok_or_else(|| Error::FactorTooLarge(n.to_string()))?;
        let mut stack = vec![v];
        let mut found: Vec<u64> = Vec::new();
        while let Some(x) = stack.pop() {
            if x == 1 {
                continue;
            }
            if is_prime_u64(x) {
                found.push(x);
                continue;
            }
            let d = pollard_brent(x);
            stack.push(d);
            stack.push(x / d);
        }
        found.sort_unstable();
        for f in found {
            push(int(f as i64), &mut out);
        }
        out.sort();
        // merge duplicates that sorting may have made adjacent
        let mut merged: Vec<(Integer, u32)> = Vec::new();
        for (p, e) in out {
            if let Some(last) = merged.last_mut() {
                if last.0 == p {
                    last.1 += e;
                    continue;
                }
            }
            merged.push((p, e));
        }
        out = merged;
    }
    Ok(out)
}

fn pollard_brent(n: u64) -> u64 {
    debug_assert!(n > 1 && !is_prime_u64(n));
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mulmod_u64(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u64(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Write n = s * f^2 with s square-free and sign(s) = sign(n). Requires n != 0.
pub fn squarefree_decompose(n: &Integer) -> Result<(Integer, Integer)> {
    if n.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let mut s = Integer::one();
    let mut f = Integer::one();
    for (p, e) in factor(n)? {
        if e % 2 == 1 {
            s *= &p;
        }
        f *= p.pow(e / 2);
    }
    if n.is_negative() {
        s = -s;
    }
    Ok((s, f))
}

pub fn is_squarefree(n: &Integer) -> Result<bool> {
    let (_, f) = squarefree_decompose(n)?;
    Ok(f.is_one())
}

/// An element of Z[1/p], stored in the canonical form u * p^k with the unit u
/// an integer coprime to p (u = 0, k = 0 for zero).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZInvP {
    p: u64,
    unit: Integer,
    exp: i64,
}

impl ZInvP {
    /// Canonicalize a rational as an element of Z[1/p]. Rejects values whose
    /// denominator is not a power of p.
    pub fn new(value: &Rational, p: u64) -> Result<Self> {
        let pi = int(p as i64);
        check_prime(&pi)?;
        if value.is_zero() {
            return Ok(ZInvP {
                p,
                unit: Integer::zero(),
                exp: 0,
            });
        }
        let (vd, ud) = split_valuation(value.denom(), &pi);
        if !ud.is_one() {
            return Err(Error::NotPPowerDenominator(value.to_string(), p));
        }
        let (vn, un) = split_valuation(value.numer(), &pi);
        Ok(ZInvP {
            p,
            unit: un,
            exp: vn - vd,
        })
    }

    pub fn from_integer(n: &Integer, p: u64) -> Result<Self> {
        Self::new(&Rational::from_integer(n.clone()), p)
    }

    pub fn zero(p: u64) -> Self {
        ZInvP {
            p,
            unit: Integer::zero(),
            exp: 0,
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// The unit u in the canonical form u * p^k (0 for zero).
    pub fn unit(&self) -> &Integer {
        &self.unit
    }

    /// The exponent k in the canonical form u * p^k.
    pub fn exp(&self) -> i64 {
        self.exp
    }

    pub fn value(&self) -> Rational {
        Rational::from_integer(self.unit.clone()) * pow_p(self.p, self.exp)
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    /// Membership in Z (nonnegative exponent, or zero).
    pub fn is_integral(&self) -> bool {
        self.is_zero() || self.exp >= 0
    }

    /// Evenness in Z[1/p]/(2) for odd p: p is invertible mod 2, so the class
    /// is the parity of the unit.
    pub fn is_even(&self) -> bool {
        self.unit.is_even()
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        Self::new(&(self.value() + other.value()), self.p).expect("closed under addition")
    }

    pub fn neg(&self) -> Self {
        ZInvP {
            p: self.p,
            unit: -self.unit.clone(),
            exp: self.exp,
        }
    }

    pub fn mul_int(&self, k: i64) -> Self {
        Self::new(&(self.value() * rat_int(k)), self.p).expect("closed under multiplication")
    }
}

/// The Z[1/p]-ideal generated by the given elements is the unit ideal exactly
/// when, after clearing p-powers, the integer gcd of the generators has no
/// prime factor other than p.
pub fn zinvp_ideal_is_unit(gens: &[ZInvP]) -> bool {
    let nonzero: Vec<&ZInvP> = gens.iter().filter(|g| !g.is_zero()).collect();
    if nonzero.is_empty() {
        return false;
    }
    let p = nonzero[0].p;
    let kmax = nonzero.iter().map(|g| -g.exp).max().unwrap().max(0);
    let mut g = Integer::zero();
    for z in &nonzero {
        let scaled = z.value() * pow_p(p, kmax);
        debug_assert!(scaled.denom().is_one());
        g = g.gcd(scaled.numer());
    }
    let (_, cofactor) = split_valuation(&g, &int(p as i64));
    cofactor.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuation_examples() {
        assert_eq!(
            valuation(&rat_int(50), &int(5)).unwrap(),
            Valuation::Finite(2)
        );
        assert_eq!(
            valuation(&rat(1, 5), &int(5)).unwrap(),
            Valuation::Finite(-1)
        );
        assert_eq!(valuation(&rat_int(0), &int(7)).unwrap(), Valuation::Infinite);
        assert!(valuation(&rat_int(3), &int(6)).is_err());
    }

    #[test]
    fn valuation_is_additive() {
        let l = int(3);
        let x = rat(18, 5);
        let y = rat(5, 27);
        let vx = valuation(&x, &l).unwrap().finite().unwrap();
        let vy = valuation(&y, &l).unwrap().finite().unwrap();
        let vxy = valuation(&(x * y), &l).unwrap().finite().unwrap();
        assert_eq!(vxy, vx + vy);
    }

    #[test]
    fn legendre_examples() {
        // squares mod 5 are {0, 1, 4}; -2 = 3 is not among them
        assert_eq!(legendre(&int(-2), &int(5)).unwrap(), -1);
        assert_eq!(legendre(&int(1), &int(7)).unwrap(), 1);
        assert_eq!(legendre(&int(10), &int(5)).unwrap(), 0);
        assert!(legendre(&int(1), &int(2)).is_err());
        assert!(legendre(&int(1), &int(9)).is_err());
    }

    #[test]
    fn legendre_against_square_enumeration() {
        for &l in &[3i64, 5, 7, 11, 13] {
            let lv = int(l);
            let mut squares = std::collections::HashSet::new();
            for x in 0..l {
                squares.insert((x * x) % l);
            }
            for a in -20..20i64 {
                let expected = if a.rem_euclid(l) == 0 {
                    0
                } else if squares.contains(&a.rem_euclid(l)) {
                    1
                } else {
                    -1
                };
                assert_eq!(legendre(&int(a), &lv).unwrap(), expected, "a={a} l={l}");
            }
        }
    }

    #[test]
    fn legendre_is_multiplicative() {
        let l = int(11);
        for a in 1..10i64 {
            for b in 1..10i64 {
                let lhs = legendre(&int(a * b), &l).unwrap();
                let rhs = legendre(&int(a), &l).unwrap() * legendre(&int(b), &l).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn kronecker_at_two() {
        assert_eq!(kronecker_at_prime(&int(-2), &int(2)).unwrap(), 0);
        assert_eq!(kronecker_at_prime(&int(7), &int(2)).unwrap(), 1);
        assert_eq!(kronecker_at_prime(&int(-1), &int(2)).unwrap(), 1);
        assert_eq!(kronecker_at_prime(&int(3), &int(2)).unwrap(), -1);
        assert_eq!(kronecker_at_prime(&int(-3), &int(2)).unwrap(), -1);
    }

    #[test]
    fn hilbert_examples() {
        let m1 = rat_int(-1);
        assert_eq!(hilbert_symbol(&m1, &m1, &Place::Infinity).unwrap(), -1);
        assert_eq!(
            hilbert_symbol(&m1, &m1, &Place::Finite(int(2))).unwrap(),
            -1
        );
        assert_eq!(
            hilbert_symbol(&m1, &m1, &Place::Finite(int(5))).unwrap(),
            1
        );
        for place in [Place::Infinity, Place::Finite(int(2)), Place::Finite(int(7))] {
            assert_eq!(hilbert_symbol(&rat_int(1), &rat(3, 7), &place).unwrap(), 1);
        }
        assert!(hilbert_symbol(&rat_int(0), &m1, &Place::Infinity).is_err());
    }

    #[test]
    fn hilbert_is_symmetric_and_kills_negatives() {
        for (a, b) in [(rat(3, 2), rat_int(-7)), (rat_int(10), rat(-4, 9))] {
            for l in [2i64, 3, 5, 7] {
                let pl = Place::Finite(int(l));
                assert_eq!(
                    hilbert_symbol(&a, &b, &pl).unwrap(),
                    hilbert_symbol(&b, &a, &pl).unwrap()
                );
                assert_eq!(hilbert_symbol(&a, &(-a.clone()), &pl).unwrap(), 1);
            }
        }
    }

    #[test]
    fn hilbert_product_formula() {
        // sample of rationals, checked over every place in the joint support
        let samples = [
            rat_int(-1),
            rat_int(2),
            rat(3, 5),
            rat_int(-6),
            rat(7, 4),
            rat(-15, 2),
            rat_int(21),
            rat(5, 11),
        ];
        for a in &samples {
            for b in &samples {
                let mut prod = hilbert_symbol(a, b, &Place::Infinity).unwrap();
                for l in hilbert_support(a, b).unwrap() {
                    prod *= hilbert_symbol(a, b, &Place::Finite(l)).unwrap();
                }
                assert_eq!(prod, 1, "product formula failed for a={a} b={b}");
            }
        }
    }

    #[test]
    fn squarefree_examples() {
        assert_eq!(squarefree_decompose(&int(12)).unwrap(), (int(3), int(2)));
        assert_eq!(squarefree_decompose(&int(-8)).unwrap(), (int(-2), int(2)));
        assert_eq!(squarefree_decompose(&int(-2)).unwrap(), (int(-2), int(1)));
        assert!(squarefree_decompose(&int(0)).is_err());
    }

    #[test]
    fn squarefree_round_trips() {
        for n in [-1000i64, -360, -97, -4, 1, 48, 300, 9604, 123456] {
            if n == 0 {
                continue;
            }
            let (s, f) = squarefree_decompose(&int(n)).unwrap();
            assert_eq!(&s * &f * &f, int(n));
            assert!(is_squarefree(&s).unwrap());
        }
    }

    #[test]
    fn factor_handles_large_composites() {
        let n = int(1_000_003) * int(998_244_353i64);
        let fs = factor(&n).unwrap();
        assert_eq!(fs, vec![(int(1_000_003), 1), (int(998_244_353i64), 1)]);
    }

    #[test]
    fn zinvp_canonical_form() {
        let x = ZInvP::new(&rat(50, 25), 5).unwrap();
        assert_eq!(x.unit(), &int(2));
        assert_eq!(x.exp(), 0);
        let y = ZInvP::new(&rat(3, 125), 5).unwrap();
        assert_eq!(y.unit(), &int(3));
        assert_eq!(y.exp(), -3);
        assert!(ZInvP::new(&rat(1, 10), 5).is_err());
        assert!(ZInvP::new(&rat(0, 1), 5).unwrap().is_zero());
    }

    #[test]
    fn zinvp_ideal_unit_detection() {
        let g1 = ZInvP::new(&rat(-1, 1), 5).unwrap();
        let g2 = ZInvP::new(&rat(-1, 5), 5).unwrap();
        let g3 = ZInvP::zero(5);
        assert!(zinvp_ideal_is_unit(&[g1, g2, g3]));
        let h1 = ZInvP::new(&rat(2, 1), 5).unwrap();
        let h2 = ZInvP::new(&rat(10, 1), 5).unwrap();
        assert!(!zinvp_ideal_is_unit(&[h1, h2]));
        assert!(!zinvp_ideal_is_unit(&[ZInvP::zero(5)]));
        // gcd 10 but 2 = unit * p: (2/5, 10) contains 2/5*5^0... gcd of (2, 50)/5 clears to 2
        let k1 = ZInvP::new(&rat(2, 5), 5).unwrap();
        let k2 = ZInvP::new(&rat(10, 1), 5).unwrap();
        assert!(!zinvp_ideal_is_unit(&[k1, k2]));
    }
}
