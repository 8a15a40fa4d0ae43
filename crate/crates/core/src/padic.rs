//! Finite-precision arithmetic in Q_p and in the unramified quadratic
//! extension Q_{p^2} = Q_p(sqrt(eps)), for an odd prime p.
//!
//! # Representation and precision
//!
//! A [`PAdic`] value is one of
//!
//! * an exact rational (rationals embed in Q_p with infinitely many known
//!   digits),
//! * `p^val * (unit + O(p^prec))` with the unit an integer in `[1, p^prec)`
//!   coprime to p, carrying `prec >= 1` known significant digits,
//! * `O(p^cap)`: a value all of whose digits below `cap` are known to vanish
//!   and about which nothing else is known (the result of complete
//!   cancellation at finite precision).
//!
//! Arithmetic propagates error terms the obvious way: multiplication and
//! inversion keep the minimum number of significant digits of the operands,
//! addition works with absolute error caps, and subtraction may therefore
//! lose leading digits. Equality comparisons are three-valued: equal,
//! distinct, or an error when fewer than one significant digit is shared —
//! a comparison below the precision floor never returns a silent answer.
//!
//! The prime 2 is rejected throughout: every consumer in this crate works at
//! odd p, and the mod-8 squareness subtleties of Q_2 are not implemented.
//!
//! # Display
//!
//! Values print digit-by-digit in the customary form
//! `a0 + a1*p + a2*p^2 + O(p^N)`, and serialize compactly as
//! `(val, unit, prec)`.

use num_integer::Integer as _;
use num_traits::{One, ToPrimitive, Zero};

use crate::exact::{
    int, is_prime_u64, legendre, pow_p, rat_int, split_valuation, Integer, Rational, Valuation,
};
use crate::{Error, Result};

/// Context for Q_p: the prime, the working precision for inexact operations
/// (Hensel lifting), and the canonical non-residue unit eps used to present
/// Q_{p^2} as Q_p(sqrt(eps)).
#[derive(Clone, Debug)]
pub struct Qp {
    p: u64,
    precision: u32,
    eps: u64,
}

impl Qp {
    /// Default working precision: 32 significant digits.
    pub const DEFAULT_PRECISION: u32 = 32;

    pub fn new(p: u64, precision: u32) -> Result<Self> {
        if p == 2 {
            return Err(Error::EvenPrime);
        }
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p.to_string()));
        }
        if precision == 0 {
            return Err(Error::InvalidInput(
                "working precision must be at least 1 digit".into(),
            ));
        }
        // canonical eps: the smallest positive non-residue mod p
        let pi = int(p as i64);
        let mut eps = 2u64;
        while legendre(&int(eps as i64), &pi)? != -1 {
            eps += 1;
        }
        Ok(Qp { p, precision, eps })
    }

    pub fn with_default_precision(p: u64) -> Result<Self> {
        Self::new(p, Self::DEFAULT_PRECISION)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// The canonical non-residue unit eps with Q_{p^2} = Q_p(sqrt(eps)).
    pub fn eps(&self) -> u64 {
        self.eps
    }

    pub fn from_rational(&self, q: &Rational) -> PAdic {
        PAdic::exact(self.p, q.clone())
    }

    pub fn from_int(&self, n: i64) -> PAdic {
        PAdic::exact(self.p, rat_int(n))
    }

    pub fn from_integer(&self, n: &Integer) -> PAdic {
        PAdic::exact(self.p, Rational::from_integer(n.clone()))
    }

    pub fn zero(&self) -> PAdic {
        self.from_int(0)
    }

    pub fn one(&self) -> PAdic {
        self.from_int(1)
    }

    /// Squareness in Q_p* for odd p: even valuation and residue unit.
    /// Errors on zero and on values with no known digit.
    pub fn is_square(&self, x: &PAdic) -> Result<bool> {
        let (val, unit_mod_p) = x.leading_data(self.p)?;
        if val % 2 != 0 {
            return Ok(false);
        }
        Ok(legendre(&unit_mod_p, &int(self.p as i64))? == 1)
    }

    /// The canonical square root of a square x: of the two roots, the one
    /// whose unit part mod p lies in {1, ..., (p-1)/2}.
    ///
    /// The root of an exact rational is computed to the context's working
    /// precision; the root of an approximate value keeps its precision.
    pub fn hensel_sqrt(&self, x: &PAdic) -> Result<PAdic> {
        if !self.is_square(x)? {
            return Err(Error::NotASquare);
        }
        let p = self.p;
        let pi = int(p as i64);
        let (val, unit, prec) = match &x.repr {
            Repr::Exact(q) => {
                let v = rational_valuation(q, &pi);
                let m = self.precision;
                (v, unit_mod(q, p, m, v), m)
            }
            Repr::Approx { val, unit, prec } => (*val, unit.clone(), *prec),
            Repr::ApproxZero { .. } => unreachable!("rejected by is_square"),
        };
        // square root of the unit mod p, then quadratic Hensel lifting
        let r0 = sqrt_mod_p(&unit.mod_floor(&pi), p);
        let mut r = r0;
        let mut k = 1u32;
        while k < prec {
            let k2 = (2 * k).min(prec);
            let modulus = pi.pow(k2);
            let u_k = unit.mod_floor(&modulus);
            let inv_r = mod_inverse(&r, &modulus);
            let inv_2 = mod_inverse(&int(2), &modulus);
            r = ((&r + u_k * inv_r) * inv_2).mod_floor(&modulus);
            k = k2;
        }
        let modulus = pi.pow(prec);
        debug_assert!(((&r * &r) - &unit).mod_floor(&modulus).is_zero());
        // canonical choice of sign
        let half = (int(p as i64) - 1) / 2;
        if r.mod_floor(&pi) > half {
            r = (&modulus - r).mod_floor(&modulus);
        }
        Ok(PAdic {
            p,
            repr: Repr::Approx {
                val: val / 2,
                unit: r,
                prec,
            },
        })
    }

    /// sqrt(d) in Q_{p^2} for an integer d that is a non-square of even
    /// valuation at p: returns s*sqrt(eps) with s = hensel_sqrt(d/eps).
    /// Values of odd valuation (ramified case) and squares are rejected.
    pub fn sqrt_in_quadext(&self, d: &Integer) -> Result<QuadExt> {
        if d.is_zero() {
            return Err(Error::ZeroArgument);
        }
        self.sqrt_disc(&self.from_integer(d))
    }

    /// Same as [`Qp::sqrt_in_quadext`], for an arbitrary nonzero p-adic value.
    pub fn sqrt_disc(&self, x: &PAdic) -> Result<QuadExt> {
        let (val, _) = x.leading_data(self.p)?;
        if val % 2 != 0 {
            return Err(Error::RamifiedSquareRoot);
        }
        if self.is_square(x)? {
            return Err(Error::ResidueSquare);
        }
        let s = self.hensel_sqrt(&x.div(&self.from_int(self.eps as i64))?)?;
        Ok(QuadExt {
            x: self.zero(),
            y: s,
            eps: self.eps,
        })
    }

    pub fn quadext(&self, x: PAdic, y: PAdic) -> QuadExt {
        assert_eq!(x.p, self.p);
        assert_eq!(y.p, self.p);
        QuadExt {
            x,
            y,
            eps: self.eps,
        }
    }

    pub fn quadext_from_base(&self, x: PAdic) -> QuadExt {
        let y = self.zero();
        self.quadext(x, y)
    }
}

/// Square root mod p by brute force for tiny p, Tonelli-Shanks otherwise.
fn sqrt_mod_p(a: &Integer, p: u64) -> Integer {
    let pi = int(p as i64);
    let a = a.mod_floor(&pi);
    debug_assert!(!a.is_zero());
    if p < 64 {
        for r in 1..p {
            let ri = int(r as i64);
            if (&ri * &ri).mod_floor(&pi) == a {
                return ri;
            }
        }
        unreachable!("caller guarantees a is a residue");
    }
    // Tonelli-Shanks: p - 1 = q * 2^s with q odd
    let mut q: Integer = &pi - 1;
    let mut s = 0u32;
    while q.is_even() {
        q /= 2;
        s += 1;
    }
    if s == 1 {
        // p = 3 (mod 4)
        return a.modpow(&((&pi + 1) / 4), &pi);
    }
    let mut z = int(2);
    while legendre(&z, &pi).unwrap() != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = z.modpow(&q, &pi);
    let mut t = a.modpow(&q, &pi);
    let mut r = a.modpow(&((&q + 1) / 2), &pi);
    while !t.is_one() {
        let mut i = 0u32;
        let mut t2 = t.clone();
        while !t2.is_one() {
            t2 = (&t2 * &t2).mod_floor(&pi);
            i += 1;
        }
        let b = c.modpow(&int(2).pow(m - i - 1), &pi);
        m = i;
        c = (&b * &b).mod_floor(&pi);
        t = (&t * &c).mod_floor(&pi);
        r = (&r * &b).mod_floor(&pi);
    }
    r
}

fn mod_inverse(a: &Integer, modulus: &Integer) -> Integer {
    let e = a.extended_gcd(modulus);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(modulus)
}

fn rational_valuation(q: &Rational, pi: &Integer) -> i64 {
    debug_assert!(!q.is_zero());
    let (vn, _) = split_valuation(q.numer(), pi);
    let (vd, _) = split_valuation(q.denom(), pi);
    vn - vd
}

/// The unit part of q (of valuation `val`) as an integer mod p^k.
fn unit_mod(q: &Rational, p: u64, k: u32, val: i64) -> Integer {
    let u = q * pow_p(p, -val);
    let modulus = int(p as i64).pow(k);
    let n = u.numer().mod_floor(&modulus);
    let d = u.denom().mod_floor(&modulus);
    (n * mod_inverse(&d, &modulus)).mod_floor(&modulus)
}

#[derive(Clone, Debug)]
enum Repr {
    /// Exactly known (rationals have infinite p-adic precision).
    Exact(Rational),
    /// p^val * (unit + O(p^prec)), unit coprime to p, 1 <= prec.
    Approx { val: i64, unit: Integer, prec: u32 },
    /// O(p^cap): zero at all known digits, unknown from cap on.
    ApproxZero { cap: i64 },
}

/// An element of Q_p with precision tracking. See the module docs for the
/// representation and the propagation rules.
#[derive(Clone, Debug)]
pub struct PAdic {
    p: u64,
    repr: Repr,
}

impl PAdic {
    pub(crate) fn exact(p: u64, q: Rational) -> PAdic {
        PAdic {
            p,
            repr: Repr::Exact(q),
        }
    }

    /// Renormalize an exactly computed rational under an error cap O(p^cap).
    fn capped(p: u64, t: Rational, cap: i64) -> PAdic {
        let pi = int(p as i64);
        if t.is_zero() {
            return PAdic {
                p,
                repr: Repr::ApproxZero { cap },
            };
        }
        let v = rational_valuation(&t, &pi);
        if v >= cap {
            return PAdic {
                p,
                repr: Repr::ApproxZero { cap },
            };
        }
        let prec = (cap - v) as u32;
        PAdic {
            p,
            repr: Repr::Approx {
                val: v,
                unit: unit_mod(&t, p, prec, v),
                prec,
            },
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Exact rational payload, when the value is exactly known.
    pub fn as_exact(&self) -> Option<&Rational> {
        match &self.repr {
            Repr::Exact(q) => Some(q),
            _ => None,
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(&self.repr, Repr::Exact(q) if q.is_zero())
    }

    /// True when at least one nonzero digit is known.
    pub fn is_known_nonzero(&self) -> bool {
        match &self.repr {
            Repr::Exact(q) => !q.is_zero(),
            Repr::Approx { .. } => true,
            Repr::ApproxZero { .. } => false,
        }
    }

    /// Valuation of the leading known digit; `None` for values with no known
    /// nonzero digit (exact zero or complete cancellation).
    pub fn lead_val(&self) -> Option<i64> {
        match &self.repr {
            Repr::Exact(q) => {
                if q.is_zero() {
                    None
                } else {
                    Some(rational_valuation(q, &int(self.p as i64)))
                }
            }
            Repr::Approx { val, .. } => Some(*val),
            Repr::ApproxZero { .. } => None,
        }
    }

    /// Position of the first unknown digit; `None` for exact values.
    pub fn error_cap(&self) -> Option<i64> {
        match &self.repr {
            Repr::Exact(_) => None,
            Repr::Approx { val, prec, .. } => Some(val + *prec as i64),
            Repr::ApproxZero { cap } => Some(*cap),
        }
    }

    /// Number of known significant digits; `None` means exact.
    pub fn effective_precision(&self) -> Option<u32> {
        match &self.repr {
            Repr::Exact(_) => None,
            Repr::Approx { prec, .. } => Some(*prec),
            Repr::ApproxZero { .. } => Some(0),
        }
    }

    /// The valuation as a checked quantity: errors when the value has no
    /// known nonzero digit but is not exactly zero.
    pub fn valuation(&self) -> Result<Valuation> {
        match &self.repr {
            Repr::Exact(q) if q.is_zero() => Ok(Valuation::Infinite),
            _ => match self.lead_val() {
                Some(v) => Ok(Valuation::Finite(v)),
                None => Err(Error::InsufficientPrecision(
                    "valuation of a value with no known digits".into(),
                )),
            },
        }
    }

    /// Leading valuation together with the unit residue mod p.
    /// Errors on zero and on values with no known digits.
    fn leading_data(&self, p: u64) -> Result<(i64, Integer)> {
        let pi = int(p as i64);
        match &self.repr {
            Repr::Exact(q) => {
                if q.is_zero() {
                    Err(Error::ZeroArgument)
                } else {
                    let v = rational_valuation(q, &pi);
                    Ok((v, unit_mod(q, p, 1, v)))
                }
            }
            Repr::Approx { val, unit, .. } => Ok((*val, unit.mod_floor(&pi))),
            Repr::ApproxZero { .. } => Err(Error::InsufficientPrecision(
                "no digits known: value cannot be distinguished from 0".into(),
            )),
        }
    }

    /// Provably divisible by p^k (in particular, true for values that vanish
    /// to k digits at the working precision).
    pub fn vanishes_to(&self, k: i64) -> bool {
        match &self.repr {
            Repr::Exact(q) => q.is_zero() || rational_valuation(q, &int(self.p as i64)) >= k,
            Repr::Approx { val, .. } => *val >= k,
            Repr::ApproxZero { cap } => *cap >= k,
        }
    }

    /// The exact value p^val * unit of the known digits, as a rational.
    fn known_part(&self) -> Rational {
        match &self.repr {
            Repr::Exact(q) => q.clone(),
            Repr::Approx { val, unit, .. } => {
                Rational::from_integer(unit.clone()) * pow_p(self.p, *val)
            }
            Repr::ApproxZero { .. } => Rational::zero(),
        }
    }

    pub fn add(&self, other: &PAdic) -> PAdic {
        assert_eq!(self.p, other.p, "mixed primes");
        match (&self.repr, &other.repr) {
            (Repr::Exact(a), Repr::Exact(b)) => PAdic::exact(self.p, a + b),
            _ => {
                let cap = match (self.error_cap(), other.error_cap()) {
                    (None, Some(c)) | (Some(c), None) => c,
                    (Some(c1), Some(c2)) => c1.min(c2),
                    (None, None) => unreachable!(),
                };
                PAdic::capped(self.p, self.known_part() + other.known_part(), cap)
            }
        }
    }

    pub fn neg(&self) -> PAdic {
        match &self.repr {
            Repr::Exact(q) => PAdic::exact(self.p, -q.clone()),
            Repr::Approx { val, unit, prec } => {
                let modulus = int(self.p as i64).pow(*prec);
                PAdic {
                    p: self.p,
                    repr: Repr::Approx {
                        val: *val,
                        unit: (&modulus - unit).mod_floor(&modulus),
                        prec: *prec,
                    },
                }
            }
            Repr::ApproxZero { cap } => PAdic {
                p: self.p,
                repr: Repr::ApproxZero { cap: *cap },
            },
        }
    }

    pub fn sub(&self, other: &PAdic) -> PAdic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &PAdic) -> PAdic {
        assert_eq!(self.p, other.p, "mixed primes");
        match (&self.repr, &other.repr) {
            (Repr::Exact(a), Repr::Exact(b)) => PAdic::exact(self.p, a * b),
            (Repr::Exact(a), _) if a.is_zero() => PAdic::exact(self.p, Rational::zero()),
            (_, Repr::Exact(b)) if b.is_zero() => PAdic::exact(self.p, Rational::zero()),
            _ => {
                // relative errors add: cap = lead1 + lead2 + min(rel1, rel2),
                // with an exact operand contributing no error of its own
                let lead = |x: &PAdic| x.lead_val().unwrap_or_else(|| x.error_cap().unwrap());
                let rel = |x: &PAdic| {
                    x.error_cap()
                        .map(|c| c - x.lead_val().unwrap_or(c))
                        .unwrap_or(i64::MAX)
                };
                let rel_prec = rel(self).min(rel(other));
                let cap = lead(self) + lead(other) + rel_prec;
                PAdic::capped(self.p, self.known_part() * other.known_part(), cap)
            }
        }
    }

    pub fn inv(&self) -> Result<PAdic> {
        match &self.repr {
            Repr::Exact(q) => {
                if q.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(PAdic::exact(self.p, q.recip()))
                }
            }
            Repr::Approx { val, unit, prec } => {
                let modulus = int(self.p as i64).pow(*prec);
                Ok(PAdic {
                    p: self.p,
                    repr: Repr::Approx {
                        val: -*val,
                        unit: mod_inverse(unit, &modulus),
                        prec: *prec,
                    },
                })
            }
            Repr::ApproxZero { .. } => Err(Error::InsufficientPrecision(
                "inverting a value not known to be nonzero".into(),
            )),
        }
    }

    pub fn div(&self, other: &PAdic) -> Result<PAdic> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn square(&self) -> PAdic {
        self.mul(self)
    }

    pub fn mul_int(&self, k: i64) -> PAdic {
        self.mul(&PAdic::exact(self.p, rat_int(k)))
    }

    /// Three-valued equality at the shared precision.
    ///
    /// Returns an error when the operands share less than one significant
    /// digit relative to their leading scale, so that agreement would be
    /// vacuous.
    pub fn eq_prec(&self, other: &PAdic) -> Result<bool> {
        assert_eq!(self.p, other.p, "mixed primes");
        if let (Repr::Exact(a), Repr::Exact(b)) = (&self.repr, &other.repr) {
            return Ok(a == b);
        }
        let d = self.sub(other);
        match &d.repr {
            Repr::Exact(q) => Ok(q.is_zero()),
            Repr::Approx { .. } => Ok(false),
            Repr::ApproxZero { cap } => {
                // all shared digits agree; demand a nonvacuous window
                let scale = match (self.lead_val(), other.lead_val()) {
                    (Some(a), Some(b)) => a.min(b),
                    (Some(a), None) => a,
                    (None, Some(b)) => b,
                    // both indistinguishable from zero: equal at precision
                    (None, None) => return Ok(true),
                };
                if cap - scale < 1 {
                    Err(Error::InsufficientPrecision(format!(
                        "comparison with {} shared digits",
                        cap - scale
                    )))
                } else {
                    Ok(true)
                }
            }
        }
    }

    /// Digits a_val, ..., a_{val+count-1} of the expansion, starting at the
    /// leading valuation. Errors when fewer than `count` digits are known.
    pub fn digits(&self, count: u32) -> Result<(i64, Vec<u64>)> {
        let pi = int(self.p as i64);
        let (val, unit) = match &self.repr {
            Repr::Exact(q) => {
                if q.is_zero() {
                    return Err(Error::ZeroArgument);
                }
                let v = rational_valuation(q, &pi);
                (v, unit_mod(q, self.p, count, v))
            }
            Repr::Approx { val, unit, prec } => {
                if *prec < count {
                    return Err(Error::InsufficientPrecision(format!(
                        "{count} digits requested, {prec} known"
                    )));
                }
                (*val, unit.clone())
            }
            Repr::ApproxZero { .. } => {
                return Err(Error::InsufficientPrecision("no digits known".into()))
            }
        };
        let mut u = unit;
        let mut ds = Vec::with_capacity(count as usize);
        for _ in 0..count {
            let (q, r) = u.div_rem(&pi);
            ds.push(r.to_u64().unwrap());
            u = q;
        }
        Ok((val, ds))
    }

    /// Render as `a0 + a1*p + ... + O(p^N)`, using at most `max_digits`
    /// digits. Exact values are truncated to the requested display length.
    pub fn to_display(&self, max_digits: u32) -> String {
        match &self.repr {
            Repr::Exact(q) if q.is_zero() => "0".to_string(),
            Repr::ApproxZero { cap } => format!("O({}^{})", self.p, cap),
            _ => {
                let shown = match self.effective_precision() {
                    Some(pr) => pr.min(max_digits),
                    None => max_digits,
                };
                let (val, ds) = self.digits(shown).expect("digits available");
                let mut terms: Vec<String> = Vec::new();
                for (i, d) in ds.iter().enumerate() {
                    if *d == 0 {
                        continue;
                    }
                    let e = val + i as i64;
                    terms.push(match e {
                        0 => format!("{d}"),
                        1 => format!("{d}*{}", self.p),
                        _ => format!("{d}*{}^{e}", self.p),
                    });
                }
                let head = if terms.is_empty() {
                    "0".to_string()
                } else {
                    terms.join(" + ")
                };
                format!("{head} + O({}^{})", self.p, val + shown as i64)
            }
        }
    }

    /// Compact machine form as JSON. Approximate values serialize as
    /// `{"val", "unit", "prec"}`; exact values as `{"exact"}`; complete
    /// cancellations as `{"zero_cap"}`.
    pub fn to_json(&self) -> serde_json::Value {
        match &self.repr {
            Repr::Exact(q) => serde_json::json!({ "exact": q.to_string() }),
            Repr::Approx { val, unit, prec } => serde_json::json!({
                "val": val,
                "unit": unit.to_string(),
                "prec": prec,
            }),
            Repr::ApproxZero { cap } => serde_json::json!({ "zero_cap": cap }),
        }
    }
}

/// An element x + y*sqrt(eps) of Q_{p^2}. It lies in the upper half-plane
/// H_p(Q_{p^2}) = Q_{p^2} minus Q_p exactly when y is nonzero at the working
/// precision.
#[derive(Clone, Debug)]
pub struct QuadExt {
    x: PAdic,
    y: PAdic,
    eps: u64,
}

impl QuadExt {
    pub fn x(&self) -> &PAdic {
        &self.x
    }

    pub fn y(&self) -> &PAdic {
        &self.y
    }

    pub fn eps(&self) -> u64 {
        self.eps
    }

    pub fn p(&self) -> u64 {
        self.x.p
    }

    fn eps_padic(&self) -> PAdic {
        PAdic::exact(self.x.p, rat_int(self.eps as i64))
    }

    /// Membership in H_p(Q_{p^2}): the sqrt(eps)-component has a known
    /// nonzero digit.
    pub fn is_in_upper_half_plane(&self) -> bool {
        self.y.is_known_nonzero()
    }

    pub fn add(&self, other: &QuadExt) -> QuadExt {
        QuadExt {
            x: self.x.add(&other.x),
            y: self.y.add(&other.y),
            eps: self.eps,
        }
    }

    pub fn sub(&self, other: &QuadExt) -> QuadExt {
        QuadExt {
            x: self.x.sub(&other.x),
            y: self.y.sub(&other.y),
            eps: self.eps,
        }
    }

    pub fn neg(&self) -> QuadExt {
        QuadExt {
            x: self.x.neg(),
            y: self.y.neg(),
            eps: self.eps,
        }
    }

    pub fn mul(&self, other: &QuadExt) -> QuadExt {
        debug_assert_eq!(self.eps, other.eps);
        let e = self.eps_padic();
        QuadExt {
            x: self.x.mul(&other.x).add(&e.mul(&self.y.mul(&other.y))),
            y: self.x.mul(&other.y).add(&self.y.mul(&other.x)),
            eps: self.eps,
        }
    }

    /// The Galois conjugate x - y*sqrt(eps) of the extension Q_{p^2} | Q_p.
    pub fn conj(&self) -> QuadExt {
        QuadExt {
            x: self.x.clone(),
            y: self.y.neg(),
            eps: self.eps,
        }
    }

    /// The norm z * conj(z) = x^2 - eps*y^2, computed directly in Q_p.
    pub fn norm(&self) -> PAdic {
        self.x.square().sub(&self.eps_padic().mul(&self.y.square()))
    }

    pub fn inv(&self) -> Result<QuadExt> {
        let n = self.norm().inv()?;
        Ok(QuadExt {
            x: self.x.mul(&n),
            y: self.y.neg().mul(&n),
            eps: self.eps,
        })
    }

    pub fn div(&self, other: &QuadExt) -> Result<QuadExt> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn mul_base(&self, s: &PAdic) -> QuadExt {
        QuadExt {
            x: self.x.mul(s),
            y: self.y.mul(s),
            eps: self.eps,
        }
    }

    pub fn eq_prec(&self, other: &QuadExt) -> Result<bool> {
        debug_assert_eq!(self.eps, other.eps);
        Ok(self.x.eq_prec(&other.x)? && self.y.eq_prec(&other.y)?)
    }

    /// Both components provably divisible by p^k.
    pub fn vanishes_to(&self, k: i64) -> bool {
        self.x.vanishes_to(k) && self.y.vanishes_to(k)
    }

    pub fn to_display(&self, max_digits: u32) -> String {
        format!(
            "({}) + ({})*sqrt({})",
            self.x.to_display(max_digits),
            self.y.to_display(max_digits),
            self.eps
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "x": self.x.to_json(),
            "y": self.y.to_json(),
            "eps": self.eps,
        })
    }
}

/// Free-function form of the Galois conjugation, x + y*sqrt(eps) to
/// x - y*sqrt(eps); an involution fixing exactly the y = 0 locus.
pub fn galois_conj(z: &QuadExt) -> QuadExt {
    z.conj()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn q5() -> Qp {
        Qp::new(5, 32).unwrap()
    }

    #[test]
    fn context_rejects_bad_primes() {
        assert!(matches!(Qp::new(2, 32), Err(Error::EvenPrime)));
        assert!(Qp::new(9, 32).is_err());
        assert!(Qp::new(5, 0).is_err());
    }

    #[test]
    fn canonical_eps() {
        assert_eq!(q5().eps(), 2);
        assert_eq!(Qp::new(7, 8).unwrap().eps(), 3);
        assert_eq!(Qp::new(13, 8).unwrap().eps(), 2);
    }

    #[test]
    fn is_square_examples() {
        let ctx = q5();
        assert!(ctx.is_square(&ctx.from_int(4)).unwrap());
        assert!(!ctx.is_square(&ctx.from_int(5)).unwrap());
        assert!(!ctx.is_square(&ctx.from_int(-2)).unwrap());
        assert!(ctx.is_square(&ctx.from_rational(&rat(4, 9))).unwrap());
        assert!(ctx.is_square(&ctx.from_int(100)).unwrap());
        assert!(!ctx.is_square(&ctx.from_int(50)).unwrap());
        assert!(matches!(
            ctx.is_square(&ctx.zero()),
            Err(Error::ZeroArgument)
        ));
    }

    #[test]
    fn nonsquare_products_are_squares() {
        let ctx = q5();
        // product of two even-valuation non-residues
        let a = ctx.from_int(-2);
        let b = ctx.from_int(3);
        assert!(!ctx.is_square(&a).unwrap());
        assert!(!ctx.is_square(&b).unwrap());
        assert!(ctx.is_square(&a.mul(&b)).unwrap());
    }

    #[test]
    fn hensel_sqrt_of_minus_one() {
        let ctx = Qp::new(5, 3).unwrap();
        let r = ctx.hensel_sqrt(&ctx.from_int(-1)).unwrap();
        let (val, ds) = r.digits(3).unwrap();
        assert_eq!(val, 0);
        // 57 = 2 + 1*5 + 2*25; 57^2 = 3249 = -1 (mod 125)
        assert_eq!(ds, vec![2, 1, 2]);
        assert_eq!(r.to_display(3), "2 + 1*5 + 2*5^2 + O(5^3)");
    }

    #[test]
    fn hensel_sqrt_canonical_choice() {
        let ctx = q5();
        let two = ctx.hensel_sqrt(&ctx.from_int(4)).unwrap();
        assert!(two.eq_prec(&ctx.from_int(2)).unwrap());
        let ctx7 = Qp::new(7, 16).unwrap();
        let three = ctx7.hensel_sqrt(&ctx7.from_int(9)).unwrap();
        assert!(three.eq_prec(&ctx7.from_int(3)).unwrap());
        assert!(matches!(
            ctx.hensel_sqrt(&ctx.from_int(5)),
            Err(Error::NotASquare)
        ));
    }

    #[test]
    fn hensel_sqrt_squares_back() {
        let ctx = q5();
        for n in [4i64, 9, 16, 100, -1, -4, 6, 11, 14, 2500, -100] {
            let x = ctx.from_int(n);
            if !ctx.is_square(&x).unwrap() {
                continue;
            }
            let r = ctx.hensel_sqrt(&x).unwrap();
            assert!(r.square().eq_prec(&x).unwrap(), "sqrt({n})^2 != {n}");
        }
    }

    #[test]
    fn sqrt_in_quadext_examples() {
        let ctx = Qp::new(5, 3).unwrap();
        // -2 = 2 * (-1): s = sqrt(-1), so s*sqrt(2) squares back to -2
        let s = ctx.sqrt_in_quadext(&int(-2)).unwrap();
        let (val, ds) = s.y().digits(3).unwrap();
        assert_eq!((val, ds), (0, vec![2, 1, 2]));
        let sq = s.mul(&s);
        assert!(sq.x().eq_prec(&ctx.from_int(-2)).unwrap());
        assert!(sq.y().vanishes_to(3));

        let e = ctx.sqrt_in_quadext(&int(2)).unwrap();
        assert!(e.y().eq_prec(&ctx.one()).unwrap());
        let e4 = ctx.sqrt_in_quadext(&int(8)).unwrap();
        assert!(e4.y().eq_prec(&ctx.from_int(2)).unwrap());

        assert!(matches!(
            ctx.sqrt_in_quadext(&int(5)),
            Err(Error::RamifiedSquareRoot)
        ));
        assert!(matches!(
            ctx.sqrt_in_quadext(&int(4)),
            Err(Error::ResidueSquare)
        ));
    }

    #[test]
    fn galois_conj_is_involution() {
        let ctx = q5();
        let z = ctx.quadext(ctx.from_int(1), ctx.from_int(1));
        let zc = galois_conj(&z);
        assert!(zc.x().eq_prec(&ctx.from_int(1)).unwrap());
        assert!(zc.y().eq_prec(&ctx.from_int(-1)).unwrap());
        assert!(galois_conj(&zc).eq_prec(&z).unwrap());
        // fixed point on the base field
        let w = ctx.quadext_from_base(ctx.from_int(7));
        assert!(galois_conj(&w).eq_prec(&w).unwrap());
    }

    #[test]
    fn norm_lands_in_base_field() {
        let ctx = q5();
        let s = ctx.sqrt_in_quadext(&int(-2)).unwrap();
        let z = ctx.quadext(ctx.from_int(3), ctx.one()).add(&s);
        let prod = z.mul(&z.conj());
        // the sqrt(eps)-component cancels identically
        assert!(prod.y().vanishes_to(30));
        assert!(prod.x().eq_prec(&z.norm()).unwrap());
    }

    #[test]
    fn conjugation_preserves_distance_to_base_points() {
        // |z - a| = |conj(z) - a| for a in Q_p: equal valuations
        let ctx = q5();
        let s = ctx.sqrt_in_quadext(&int(-2)).unwrap();
        let z = ctx
            .quadext(ctx.from_rational(&rat(7, 5)), ctx.one())
            .add(&s);
        for a in [0i64, 1, -3, 10, 25] {
            let av = ctx.quadext_from_base(ctx.from_int(a));
            let d1 = z.sub(&av);
            let d2 = z.conj().sub(&av);
            let v1 = d1.x().lead_val().min(d1.y().lead_val());
            let v2 = d2.x().lead_val().min(d2.y().lead_val());
            assert_eq!(v1, v2);
        }
    }

    #[test]
    fn precision_loss_in_subtraction() {
        let ctx = q5();
        let r = ctx.hensel_sqrt(&ctx.from_int(-1)).unwrap();
        let d = r.sub(&r);
        assert!(!d.is_known_nonzero());
        assert!(d.vanishes_to(32));
        // comparing two complete cancellations succeeds
        assert!(d.eq_prec(&d).unwrap());
    }

    #[test]
    fn comparison_below_floor_errors() {
        let ctx = q5();
        let r = ctx.hensel_sqrt(&ctx.from_int(-1)).unwrap();
        let cancel = r.sub(&r); // O(5^32)
        let big = ctx.from_integer(&int(5).pow(33)); // leading digit beyond the cap
        assert!(matches!(
            cancel.eq_prec(&big),
            Err(Error::InsufficientPrecision(_))
        ));
        // and inversion of an unknown-zero is refused
        assert!(cancel.inv().is_err());
    }

    #[test]
    fn exact_arithmetic_stays_exact() {
        let ctx = q5();
        let a = ctx.from_rational(&rat(3, 7));
        let b = ctx.from_rational(&rat(-1, 5));
        let c = a.mul(&b).add(&a).div(&b).unwrap();
        assert!(c.as_exact().is_some());
        let direct = (rat(3, 7) * rat(-1, 5) + rat(3, 7)) / rat(-1, 5);
        assert_eq!(c.as_exact().unwrap(), &direct);
    }

    #[test]
    fn display_negative_valuation() {
        let ctx = q5();
        let x = ctx.from_rational(&rat(2, 5));
        assert_eq!(x.to_display(2), "2*5^-1 + O(5^1)");
    }

    #[test]
    fn division_tracks_precision() {
        let ctx = q5();
        let r = ctx.hensel_sqrt(&ctx.from_int(6)).unwrap(); // 32 digits
        let q = ctx.one().div(&r).unwrap();
        assert_eq!(q.effective_precision(), Some(32));
        assert!(q.mul(&r).eq_prec(&ctx.one()).unwrap());
    }
}
