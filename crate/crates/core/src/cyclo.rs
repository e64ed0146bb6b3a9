//! Exact arithmetic in the cyclotomic field Q(zeta_M).
//!
//! Elements are stored in the power basis 1, z, ..., z^(phi(M)-1) after
//! reduction modulo the M-th cyclotomic polynomial, so equality of reduced
//! coefficient vectors decides equality in the field.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Euler totient.
pub fn phi(m: u32) -> u32 {
    let mut n = m;
    let mut result = m;
    let mut p = 2u32;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn divisors(n: u32) -> Vec<u32> {
    let mut divs = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n % i == 0 {
            divs.push(i);
            if i != n / i {
                divs.push(n / i);
            }
        }
        i += 1;
    }
    divs.sort_unstable();
    divs
}

/// Integer polynomial helpers on dense coefficient vectors (ascending powers).
fn poly_trim(v: &mut Vec<Rat>) {
    while v.last().map(Zero::is_zero).unwrap_or(false) {
        v.pop();
    }
}

fn poly_divrem(num: &[Rat], den: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let mut rem: Vec<Rat> = num.to_vec();
    poly_trim(&mut rem);
    let mut dreg = den.to_vec();
    poly_trim(&mut dreg);
    assert!(!dreg.is_empty(), "division by zero polynomial");
    let dd = dreg.len() - 1;
    let lead = dreg[dd].clone();
    if rem.len() < dreg.len() {
        return (vec![], rem);
    }
    let mut quot = vec![Rat::zero(); rem.len() - dd];
    while rem.len() >= dreg.len() {
        let k = rem.len() - 1 - dd;
        let c = &rem[rem.len() - 1] / &lead;
        quot[k] = c.clone();
        for (i, dc) in dreg.iter().enumerate() {
            let t = &c * dc;
            rem[k + i] -= t;
        }
        poly_trim(&mut rem);
        if rem.is_empty() {
            break;
        }
    }
    (quot, rem)
}

/// The m-th cyclotomic polynomial, by recursive division of x^m - 1.
fn cyclotomic_poly(m: u32) -> Vec<Rat> {
    if m == 1 {
        return vec![-rat(1), rat(1)];
    }
    let mut num = vec![Rat::zero(); m as usize + 1];
    num[0] = -rat(1);
    num[m as usize] = rat(1);
    let mut quo = num;
    for d in divisors(m) {
        if d == m {
            continue;
        }
        let phi_d = cyclotomic_poly(d);
        let (q, r) = poly_divrem(&quo, &phi_d);
        assert!(r.is_empty(), "cyclotomic division must be exact");
        quo = q;
    }
    quo
}

/// Per-order context: the cyclotomic polynomial, reductions of high powers,
/// and the table of all powers of zeta.
struct CycloCtx {
    m: u32,
    deg: usize,
    /// Reduction of x^(deg+k) modulo Phi_m, for k = 0 .. deg-2.
    high: Vec<Vec<Rat>>,
    /// Coefficients of zeta_m^e for e = 0 .. m-1.
    pows: Vec<Vec<Rat>>,
    phi_poly: Vec<Rat>,
}

impl CycloCtx {
    fn new(m: u32) -> Self {
        let phi_poly = cyclotomic_poly(m);
        let deg = phi_poly.len() - 1;
        // x^deg = -(phi_poly minus leading term); then recur upward.
        let mut high: Vec<Vec<Rat>> = Vec::with_capacity(deg.saturating_sub(1));
        let base: Vec<Rat> = phi_poly[..deg].iter().map(|c| -c.clone()).collect();
        if deg >= 1 {
            high.push(base);
            for _ in 1..deg.saturating_sub(1).max(1) {
                if high.len() >= deg.max(2) - 1 {
                    break;
                }
                let prev = high.last().unwrap().clone();
                // multiply by x and reduce the single overflowing term
                let mut next = vec![Rat::zero(); deg];
                for (i, c) in prev.iter().enumerate() {
                    if i + 1 < deg {
                        next[i + 1] += c;
                    } else {
                        let top = &high[0];
                        for (j, t) in top.iter().enumerate() {
                            next[j] += c * t;
                        }
                    }
                }
                high.push(next);
            }
        }
        let mut pows: Vec<Vec<Rat>> = Vec::with_capacity(m as usize);
        let mut cur = vec![Rat::zero(); deg];
        cur[0] = rat(1);
        for _ in 0..m {
            pows.push(cur.clone());
            // multiply by x
            let mut next = vec![Rat::zero(); deg];
            for (i, c) in cur.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if i + 1 < deg {
                    next[i + 1] += c;
                } else {
                    for (j, t) in high[0].iter().enumerate() {
                        next[j] += c * t;
                    }
                }
            }
            cur = next;
        }
        CycloCtx { m, deg, high, pows, phi_poly }
    }
}

fn ctx(m: u32) -> Arc<CycloCtx> {
    static REGISTRY: OnceLock<Mutex<HashMap<u32, Arc<CycloCtx>>>> = OnceLock::new();
    let reg = REGISTRY.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = reg.lock().unwrap();
    guard.entry(m).or_insert_with(|| Arc::new(CycloCtx::new(m))).clone()
}

/// An element of Q(zeta_M), in canonical reduced form.
#[derive(Clone, PartialEq, Eq)]
pub struct Cyclo {
    order: u32,
    coeffs: Vec<Rat>,
}

impl Cyclo {
    pub fn zero(m: u32) -> Self {
        let deg = phi(m) as usize;
        Cyclo { order: m, coeffs: vec![Rat::zero(); deg] }
    }

    pub fn one(m: u32) -> Self {
        Self::from_rat(m, rat(1))
    }

    pub fn from_rat(m: u32, r: Rat) -> Self {
        let mut c = Self::zero(m);
        c.coeffs[0] = r;
        c
    }

    pub fn from_int(m: u32, n: i64) -> Self {
        Self::from_rat(m, rat(n))
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// zeta_M^k, for any integer k.
    pub fn zeta(m: u32, k: i64) -> Self {
        let c = ctx(m);
        let e = k.rem_euclid(m as i64) as usize;
        Cyclo { order: m, coeffs: c.pows[e].clone() }
    }

    /// If this element equals zeta_M^e for some e, return e.
    pub fn as_zeta_power(&self) -> Option<u32> {
        let c = ctx(self.order);
        (0..self.order).find(|&e| self.coeffs == c.pows[e as usize])
    }

    fn reduce_vec(m: u32, mut v: Vec<Rat>) -> Self {
        let c = ctx(m);
        let deg = c.deg;
        if v.len() > deg {
            for i in (deg..v.len()).rev() {
                if v[i].is_zero() {
                    continue;
                }
                let coef = std::mem::replace(&mut v[i], Rat::zero());
                let red = &c.high[i - deg];
                for (j, t) in red.iter().enumerate() {
                    if !t.is_zero() {
                        v[j] += &coef * t;
                    }
                }
            }
        }
        v.truncate(deg);
        v.resize(deg, Rat::zero());
        Cyclo { order: m, coeffs: v }
    }

    fn promote_pair(a: &Cyclo, b: &Cyclo) -> (Cyclo, Cyclo) {
        if a.order == b.order {
            return (a.clone(), b.clone());
        }
        let l = num_integer::lcm(a.order, b.order);
        (a.embed(l).unwrap(), b.embed(l).unwrap())
    }

    pub fn add(&self, rhs: &Cyclo) -> Cyclo {
        let (mut a, b) = Self::promote_pair(self, rhs);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs.iter()) {
            *x += y;
        }
        a
    }

    pub fn sub(&self, rhs: &Cyclo) -> Cyclo {
        let (mut a, b) = Self::promote_pair(self, rhs);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs.iter()) {
            *x -= y;
        }
        a
    }

    pub fn neg(&self) -> Cyclo {
        let mut a = self.clone();
        for x in a.coeffs.iter_mut() {
            *x = -x.clone();
        }
        a
    }

    pub fn mul(&self, rhs: &Cyclo) -> Cyclo {
        let (a, b) = Self::promote_pair(self, rhs);
        if a.is_zero() || b.is_zero() {
            return Cyclo::zero(a.order);
        }
        let deg = a.coeffs.len();
        let mut out = vec![Rat::zero(); 2 * deg - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                out[i + j] += x * y;
            }
        }
        Self::reduce_vec(a.order, out)
    }

    pub fn scale(&self, r: &Rat) -> Cyclo {
        let mut a = self.clone();
        for x in a.coeffs.iter_mut() {
            *x *= r;
        }
        a
    }

    pub fn inv(&self) -> Result<Cyclo> {
        if self.is_zero() {
            return Err(Error::DivisionByZero { order: self.order });
        }
        let c = ctx(self.order);
        // extended Euclid over Q[x]: u*self + v*Phi = gcd = const
        let mut r0: Vec<Rat> = c.phi_poly.clone();
        let mut r1: Vec<Rat> = self.coeffs.clone();
        poly_trim(&mut r1);
        let mut s0: Vec<Rat> = vec![];
        let mut s1: Vec<Rat> = vec![rat(1)];
        while !r1.is_empty() && r1.len() > 1 {
            let (q, r) = poly_divrem(&r0, &r1);
            // s_next = s0 - q*s1
            let mut qs = vec![Rat::zero(); q.len() + s1.len()];
            for (i, qa) in q.iter().enumerate() {
                if qa.is_zero() {
                    continue;
                }
                for (j, sb) in s1.iter().enumerate() {
                    qs[i + j] += qa * sb;
                }
            }
            let n = s0.len().max(qs.len());
            let mut snext = vec![Rat::zero(); n];
            for (i, v) in s0.iter().enumerate() {
                snext[i] += v;
            }
            for (i, v) in qs.iter().enumerate() {
                snext[i] -= v;
            }
            poly_trim(&mut snext);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = snext;
        }
        if r1.is_empty() {
            return Err(Error::DivisionByZero { order: self.order });
        }
        let g = r1[0].clone(); // nonzero constant gcd
        let inv_g = Rat::one() / g;
        let mut coeffs: Vec<Rat> = s1.iter().map(|x| x * &inv_g).collect();
        poly_trim(&mut coeffs);
        Ok(Self::reduce_vec(self.order, coeffs))
    }

    pub fn div(&self, rhs: &Cyclo) -> Result<Cyclo> {
        let (a, b) = Self::promote_pair(self, rhs);
        Ok(a.mul(&b.inv()?))
    }

    pub fn pow(&self, k: i64) -> Result<Cyclo> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Cyclo::one(self.order);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        Ok(acc)
    }

    /// The injective field morphism Q(zeta_M) -> Q(zeta_M') sending
    /// zeta_M to zeta_M'^(M'/M).
    pub fn embed(&self, m2: u32) -> Result<Cyclo> {
        if m2 == self.order {
            return Ok(self.clone());
        }
        if m2 % self.order != 0 {
            return Err(Error::BadEmbedding(m2, self.order));
        }
        let f = (m2 / self.order) as usize;
        let c2 = ctx(m2);
        let mut out = Cyclo::zero(m2);
        for (k, coef) in self.coeffs.iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            let p = &c2.pows[(k * f) % m2 as usize];
            for (j, t) in p.iter().enumerate() {
                if !t.is_zero() {
                    out.coeffs[j] += coef * t;
                }
            }
        }
        Ok(out)
    }

    /// Smallest n >= 1 with self^n = 1, if self is a root of unity.
    pub fn order_of(&self) -> Result<Option<u32>> {
        if self.is_zero() {
            return Err(Error::OrderOfZero);
        }
        let l = num_integer::lcm(2, self.order);
        for d in divisors(l) {
            if self.pow(d as i64)?.is_one() {
                return Ok(Some(d));
            }
        }
        Ok(None)
    }

    /// Standard complex embedding zeta_M -> exp(2*pi*i/M).
    pub fn numeric_eval(&self) -> (f64, f64) {
        let m = self.order as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let x = rat_to_f64(c);
            let ang = 2.0 * std::f64::consts::PI * (k as f64) / m;
            re += x * ang.cos();
            im += x * ang.sin();
        }
        (re, im)
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    let num = r.numer();
    let den = r.denom();
    // good enough for the tolerances used here
    let fnum: f64 = num.to_string().parse().unwrap_or(f64::NAN);
    let fden: f64 = den.to_string().parse().unwrap_or(f64::NAN);
    fnum / fden
}

impl fmt::Display for Cyclo {
    /// Textual form "c0 + c1*z + c2*z^2" with rational coefficients.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                if c.is_negative() {
                    write!(f, " - ")?;
                } else {
                    write!(f, " + ")?;
                }
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{a}*z")?,
                _ => write!(f, "{a}*z^{k}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclo[{}]({})", self.order, self)
    }
}

impl Cyclo {
    /// Parse the textual form produced by `Display`, in the field Q(zeta_M).
    pub fn parse(m: u32, s: &str) -> Result<Cyclo> {
        let mut out = Cyclo::zero(m);
        // normalize binary minus into "+-"
        let mut norm = String::with_capacity(s.len());
        let mut prev_sig = '\0';
        for ch in s.chars() {
            if ch == '-' && !matches!(prev_sig, '\0' | '+' | '*' | '/' | '^' | '-') {
                norm.push('+');
            }
            norm.push(ch);
            if !ch.is_whitespace() {
                prev_sig = ch;
            }
        }
        for raw in norm.split('+') {
            let term = raw.trim();
            if term.is_empty() {
                continue;
            }
            let (coef_str, pow) = match term.find('z') {
                None => (term, 0usize),
                Some(zi) => {
                    let coef = term[..zi].trim().trim_end_matches('*').trim();
                    let rest = term[zi + 1..].trim();
                    let p = if rest.is_empty() {
                        1
                    } else {
                        let e = rest
                            .strip_prefix('^')
                            .ok_or_else(|| Error::Parse(format!("bad term `{term}`")))?;
                        e.trim()
                            .parse::<usize>()
                            .map_err(|e| Error::Parse(format!("bad exponent: {e}")))?
                    };
                    (coef, p)
                }
            };
            let cs: String = coef_str.chars().filter(|c| !c.is_whitespace()).collect();
            let coef = match cs.as_str() {
                "" => rat(1),
                "-" => rat(-1),
                s => Rat::from_str(s).map_err(|e| Error::Parse(format!("bad rational `{s}`: {e}")))?,
            };
            let z = Cyclo::zeta(m, pow as i64);
            out = out.add(&z.scale(&coef));
        }
        Ok(out)
    }
}

impl std::ops::Add for &Cyclo {
    type Output = Cyclo;
    fn add(self, rhs: &Cyclo) -> Cyclo {
        Cyclo::add(self, rhs)
    }
}
impl std::ops::Sub for &Cyclo {
    type Output = Cyclo;
    fn sub(self, rhs: &Cyclo) -> Cyclo {
        Cyclo::sub(self, rhs)
    }
}
impl std::ops::Mul for &Cyclo {
    type Output = Cyclo;
    fn mul(self, rhs: &Cyclo) -> Cyclo {
        Cyclo::mul(self, rhs)
    }
}
impl std::ops::Neg for &Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        Cyclo::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totient_and_cyclotomic() {
        assert_eq!(phi(1), 1);
        assert_eq!(phi(6), 2);
        assert_eq!(phi(12), 4);
        let p6 = cyclotomic_poly(6);
        assert_eq!(p6, vec![rat(1), rat(-1), rat(1)]);
    }

    #[test]
    fn zeta3_sum_is_minus_one() {
        // zeta_3 + zeta_3^2 = -1
        let z = Cyclo::zeta(3, 1);
        let z2 = Cyclo::zeta(3, 2);
        assert_eq!(z.add(&z2), Cyclo::from_int(3, -1));
    }

    #[test]
    fn one_minus_xi_sq_cubed() {
        // (1 - xi^2)^3 = 3(xi - xi^2) for xi = zeta_3
        let xi = Cyclo::zeta(3, 1);
        let lhs = Cyclo::one(3).sub(&xi.pow(2).unwrap()).pow(3).unwrap();
        let rhs = xi.sub(&xi.pow(2).unwrap()).scale(&rat(3));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn rational_square_at_order_two() {
        // (1 - (-1)^{-1})^2 = 4 with xi = -1
        let xi = Cyclo::zeta(2, 1);
        let v = Cyclo::one(2).sub(&xi.pow(-1).unwrap()).pow(2).unwrap();
        assert_eq!(v, Cyclo::from_int(2, 4));
    }

    #[test]
    fn order_of_and_embed() {
        let z6 = Cyclo::zeta(6, 3);
        assert_eq!(z6.order_of().unwrap(), Some(2));
        let z3 = Cyclo::zeta(3, 1);
        assert_eq!(z3.embed(6).unwrap(), Cyclo::zeta(6, 2));
        let not_root = Cyclo::from_int(3, 2);
        assert_eq!(not_root.order_of().unwrap(), None);
        assert!(Cyclo::zero(3).order_of().is_err());
    }

    #[test]
    fn numeric_eval_i() {
        let (re, im) = Cyclo::zeta(4, 1).numeric_eval();
        assert!(re.abs() < 1e-12 && (im - 1.0).abs() < 1e-12);
    }

    #[test]
    fn inversion() {
        let a = Cyclo::zeta(5, 1).add(&Cyclo::from_int(5, 2));
        let inv = a.inv().unwrap();
        assert!(a.mul(&inv).is_one());
    }

    #[test]
    fn parse_print_roundtrip() {
        let a = Cyclo::zeta(12, 5)
            .scale(&Rat::new(BigInt::from(-7), BigInt::from(3)))
            .add(&Cyclo::from_int(12, 2));
        let s = a.to_string();
        let b = Cyclo::parse(12, &s).unwrap();
        assert_eq!(a, b);
        assert_eq!(Cyclo::parse(3, "1 + -1/2*z").unwrap(), Cyclo::parse(3, "1 - 1/2*z").unwrap());
    }

    #[test]
    fn mixed_order_promotion() {
        let a = Cyclo::zeta(3, 1);
        let b = Cyclo::zeta(2, 1); // -1
        let c = a.mul(&b);
        assert_eq!(c.order(), 6);
        assert_eq!(c, Cyclo::zeta(6, 5));
    }

    #[test]
    fn field_axioms_random() {
        // exact associativity / distributivity / inverses on pseudo-random triples
        let mut seed = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed
        };
        for _ in 0..200 {
            let m = 12;
            let mk = |r: &mut dyn FnMut() -> u64| {
                let mut c = Cyclo::zero(m);
                for _ in 0..3 {
                    let e = (r() % m as u64) as i64;
                    let n = (r() % 7) as i64 - 3;
                    c = c.add(&Cyclo::zeta(m, e).scale(&rat(n)));
                }
                c
            };
            let a = mk(&mut next);
            let b = mk(&mut next);
            let c = mk(&mut next);
            assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            if !a.is_zero() {
                assert!(a.mul(&a.inv().unwrap()).is_one());
            }
        }
    }
}
