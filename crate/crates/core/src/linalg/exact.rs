//! Exact arithmetic for kets whose nonzero amplitudes are roots of unity
//! times a common real scale.
//!
//! Inner products of such kets live in the cyclotomic ring `Z[w]`,
//! `w = exp(2 pi i / N)`. Elements are kept reduced modulo the cyclotomic
//! polynomial `Phi_N`, whose powers `1, w, ..., w^(phi(N)-1)` form a
//! Z-basis, so an element is zero iff every reduced coefficient is zero.

use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::Ket;

/// Integer polynomial coefficients, lowest degree first.
type Poly = Vec<i64>;

fn trim(p: &mut Poly) {
    while p.len() > 1 && *p.last().unwrap() == 0 {
        p.pop();
    }
}

/// Exact division of integer polynomials by a monic divisor. Returns
/// (quotient, remainder).
fn divmod_monic(num: &[i64], den: &[i64]) -> (Poly, Poly) {
    let dd = den.len() - 1;
    debug_assert_eq!(den[dd], 1);
    let mut rem: Poly = num.to_vec();
    trim(&mut rem);
    if rem.len() <= dd {
        return (vec![0], rem);
    }
    let mut quot = vec![0i64; rem.len() - dd];
    for i in (dd..rem.len()).rev() {
        let coef = rem[i];
        if coef == 0 {
            continue;
        }
        quot[i - dd] = coef;
        for (j, &dj) in den.iter().enumerate() {
            rem[i - dd + j] -= coef * dj;
        }
    }
    rem.truncate(dd.max(1));
    trim(&mut rem);
    (quot, rem)
}

/// `Phi_n` by dividing `x^n - 1` by `Phi_d` for every proper divisor `d`.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    assert!(n >= 1);
    let mut p: Poly = vec![0; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let (q, r) = divmod_monic(&p, &cyclotomic_polynomial(d));
            debug_assert!(r.iter().all(|&c| c == 0));
            p = q;
        }
    }
    trim(&mut p);
    p
}

thread_local! {
    static PHI_CACHE: RefCell<HashMap<u32, Vec<i64>>> = RefCell::new(HashMap::new());
}

/// Element of `Z[exp(2 pi i / order)]`, reduced modulo `Phi_order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cyclotomic {
    order: u32,
    coeffs: Vec<i64>,
}

impl Cyclotomic {
    /// Builds from coefficients on `1, w, ..., w^(order-1)` (any length;
    /// exponents are taken mod `order`).
    pub fn from_power_coeffs(order: u32, raw: &[i64]) -> Self {
        let n = order as usize;
        let mut folded = vec![0i64; n];
        for (k, &c) in raw.iter().enumerate() {
            folded[k % n] += c;
        }
        let rem = PHI_CACHE.with(|cache| {
            let mut cache = cache.borrow_mut();
            let phi = cache.entry(order).or_insert_with(|| cyclotomic_polynomial(order));
            divmod_monic(&folded, phi).1
        });
        Cyclotomic { order, coeffs: rem }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn to_complex(&self) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| Complex64::from_polar(c as f64, 2.0 * PI * k as f64 / self.order as f64))
            .sum()
    }
}

/// Ket `(1/sqrt(norm_sq)) sum_j w^(e_j) |j>` over the coordinates with a
/// stored exponent. Coordinates without an exponent are zero; `norm_sq`
/// equals the number of nonzero coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactKet {
    order: u32,
    exps: Vec<Option<u32>>,
}

impl ExactKet {
    pub fn new(order: u32, exps: Vec<Option<u32>>) -> Result<Self> {
        if order == 0 {
            return Err(Error::Invalid("root-of-unity order must be positive".into()));
        }
        if exps.iter().all(Option::is_none) {
            return Err(Error::Invalid("exact ket has no nonzero amplitude".into()));
        }
        let exps = exps.into_iter().map(|e| e.map(|x| x % order)).collect();
        Ok(ExactKet { order, exps })
    }

    /// Ket with entries in `{-1, 0, +1}` (order-2 roots of unity).
    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        let exps = signs
            .iter()
            .map(|&s| match s {
                0 => Ok(None),
                1 => Ok(Some(0)),
                -1 => Ok(Some(1)),
                other => Err(Error::Invalid(format!("sign entry {other} not in {{-1,0,1}}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        ExactKet::new(2, exps)
    }

    pub fn dim(&self) -> usize {
        self.exps.len()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn norm_sq(&self) -> u32 {
        self.exps.iter().filter(|e| e.is_some()).count() as u32
    }

    pub fn exponents(&self) -> &[Option<u32>] {
        &self.exps
    }

    fn lifted(&self, order: u32) -> Vec<Option<u32>> {
        let f = order / self.order;
        self.exps.iter().map(|e| e.map(|x| x * f)).collect()
    }

    /// `sqrt(norm_a * norm_b) <self|other>` as an exact cyclotomic integer.
    pub fn inner_numerator(&self, other: &ExactKet) -> Result<Cyclotomic> {
        if self.dim() != other.dim() {
            return Err(Error::dim(format!("exact kets of dim {} and {}", self.dim(), other.dim())));
        }
        let order = lcm(self.order, other.order);
        let a = self.lifted(order);
        let b = other.lifted(order);
        let mut raw = vec![0i64; order as usize];
        for (ea, eb) in a.iter().zip(&b) {
            if let (Some(x), Some(y)) = (ea, eb) {
                // conj(w^x) w^y = w^(y - x)
                let k = (y + order - x) % order;
                raw[k as usize] += 1;
            }
        }
        Ok(Cyclotomic::from_power_coeffs(order, &raw))
    }

    pub fn is_orthogonal(&self, other: &ExactKet) -> Result<bool> {
        Ok(self.inner_numerator(other)?.is_zero())
    }

    pub fn to_ket(&self) -> Ket {
        let scale = 1.0 / (self.norm_sq() as f64).sqrt();
        let amps = self
            .exps
            .iter()
            .map(|e| match e {
                Some(k) => Complex64::from_polar(scale, 2.0 * PI * *k as f64 / self.order as f64),
                None => Complex64::new(0.0, 0.0),
            })
            .collect();
        Ket::normalized(amps).expect("exact ket is nonzero")
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u32, b: u32) -> u32 {
    a / gcd(a, b) * b
}
