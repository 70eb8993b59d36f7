use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arithmetic context for the cyclotomic field of conductor `n`.
///
/// Numbers are stored in the power basis `1, ζ, …, ζ^{φ(n)-1}`; `powers[k]`
/// holds the reduction of `ζ^k` for every `0 ≤ k < n`.
#[derive(Debug)]
pub struct CycContext {
    conductor: u32,
    degree: usize,
    minpoly: Vec<BigInt>,
    powers: Vec<Vec<BigRational>>,
}

pub type Ctx = Arc<CycContext>;

impl PartialEq for CycContext {
    fn eq(&self, other: &Self) -> bool {
        self.conductor == other.conductor
    }
}

impl Eq for CycContext {}

/// Integer coefficients of the `n`-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    assert!(n >= 1);
    // x^n - 1 divided by Φ_d for every proper divisor d
    let mut poly: Vec<BigInt> = vec![BigInt::zero(); n as usize + 1];
    poly[0] = -BigInt::one();
    poly[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            poly = exact_div(&poly, &cyclotomic_polynomial(d));
        }
    }
    poly
}

fn exact_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    // den is monic
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let nd = num.len() - 1;
    let mut quot = vec![BigInt::zero(); nd - dd + 1];
    for k in (0..=nd - dd).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[k + j] -= &c * dj;
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    quot
}

impl CycContext {
    pub fn new(n: u32) -> Result<Ctx> {
        if n == 0 {
            return Err(Error::ZeroConductor);
        }
        let minpoly = cyclotomic_polynomial(n);
        let degree = minpoly.len() - 1;
        let mut powers = Vec::with_capacity(n as usize);
        let mut cur = vec![BigRational::zero(); degree];
        cur[0] = BigRational::one();
        for _ in 0..n {
            powers.push(cur.clone());
            // multiply by ζ and reduce with ζ^d = -Σ m_i ζ^i
            let top = cur[degree - 1].clone();
            let mut next = vec![BigRational::zero(); degree];
            for i in (1..degree).rev() {
                next[i] = cur[i - 1].clone();
            }
            if !top.is_zero() {
                for (i, m) in minpoly.iter().take(degree).enumerate() {
                    next[i] -= &top * BigRational::from_integer(m.clone());
                }
            }
            cur = next;
        }
        Ok(Arc::new(CycContext { conductor: n, degree, minpoly, powers }))
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn minimal_polynomial(&self) -> &[BigInt] {
        &self.minpoly
    }

    /// Power-basis coordinates of `ζ^k` for any integer `k`.
    pub fn power(&self, k: i64) -> &[BigRational] {
        let n = self.conductor as i64;
        &self.powers[k.rem_euclid(n) as usize]
    }
}

/// `make_context(n)`: the field ℚ(ζ_n).
pub fn make_context(n: u32) -> Result<Ctx> {
    CycContext::new(n)
}

/// An element of ℚ(ζ_n) in canonical power-basis form.
#[derive(Clone)]
pub struct CycNumber {
    ctx: Ctx,
    coeffs: Vec<BigRational>,
}

impl PartialEq for CycNumber {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.conductor == other.ctx.conductor && self.coeffs == other.coeffs
    }
}

impl Eq for CycNumber {}

impl std::hash::Hash for CycNumber {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.ctx.conductor.hash(state);
        self.coeffs.hash(state);
    }
}

impl CycNumber {
    pub fn zero(ctx: &Ctx) -> Self {
        CycNumber { ctx: ctx.clone(), coeffs: vec![BigRational::zero(); ctx.degree] }
    }

    pub fn one(ctx: &Ctx) -> Self {
        Self::from_int(ctx, 1)
    }

    pub fn from_int(ctx: &Ctx, v: i64) -> Self {
        Self::from_rational(ctx, BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_ratio(ctx: &Ctx, num: i64, den: i64) -> Self {
        Self::from_rational(ctx, BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(ctx: &Ctx, r: BigRational) -> Self {
        let mut z = Self::zero(ctx);
        z.coeffs[0] = r;
        z
    }

    /// `ζ_n^k`.
    pub fn zeta_pow(ctx: &Ctx, k: i64) -> Self {
        CycNumber { ctx: ctx.clone(), coeffs: ctx.power(k).to_vec() }
    }

    /// Build from power-basis coordinates; the vector must have length φ(n).
    pub fn from_coeffs(ctx: &Ctx, coeffs: Vec<BigRational>) -> Result<Self> {
        if coeffs.len() != ctx.degree {
            return Err(Error::DimensionMismatch(format!(
                "expected {} coefficients, got {}",
                ctx.degree,
                coeffs.len()
            )));
        }
        Ok(CycNumber { ctx: ctx.clone(), coeffs })
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// The rational value if the number lies in ℚ.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ctx.conductor != other.ctx.conductor {
            Err(Error::ContextMismatch(self.ctx.conductor, other.ctx.conductor))
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(CycNumber { ctx: self.ctx.clone(), coeffs })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(CycNumber { ctx: self.ctx.clone(), coeffs })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let d = self.ctx.degree;
        if d == 1 {
            return Ok(CycNumber {
                ctx: self.ctx.clone(),
                coeffs: vec![&self.coeffs[0] * &other.coeffs[0]],
            });
        }
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.ctx));
        }
        let mut raw = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    raw[i + j] += a * b;
                }
            }
        }
        let mut coeffs: Vec<BigRational> = raw[..d].to_vec();
        for (k, c) in raw.iter().enumerate().skip(d) {
            if c.is_zero() {
                continue;
            }
            for (slot, p) in coeffs.iter_mut().zip(self.ctx.power(k as i64)) {
                if !p.is_zero() {
                    *slot += c * p;
                }
            }
        }
        Ok(CycNumber { ctx: self.ctx.clone(), coeffs })
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        CycNumber { ctx: self.ctx.clone(), coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    /// Multiplicative inverse, by solving `self · x = 1` in the power basis.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let d = self.ctx.degree;
        if d == 1 {
            return Ok(CycNumber { ctx: self.ctx.clone(), coeffs: vec![self.coeffs[0].recip()] });
        }
        // column j = self · ζ^j
        let cols: Vec<Vec<BigRational>> = (0..d)
            .map(|j| (self * &CycNumber::zeta_pow(&self.ctx, j as i64)).coeffs)
            .collect();
        let mut m: Vec<Vec<BigRational>> = (0..d)
            .map(|i| {
                let mut row: Vec<BigRational> = (0..d).map(|j| cols[j][i].clone()).collect();
                row.push(if i == 0 { BigRational::one() } else { BigRational::zero() });
                row
            })
            .collect();
        for col in 0..d {
            let piv = (col..d).find(|&r| !m[r][col].is_zero()).ok_or(Error::DivisionByZero)?;
            m.swap(col, piv);
            let p = m[col][col].recip();
            for v in m[col].iter_mut() {
                *v *= &p;
            }
            for r in 0..d {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for c in col..=d {
                        let delta = &f * &m[col][c];
                        m[r][c] -= delta;
                    }
                }
            }
        }
        Ok(CycNumber { ctx: self.ctx.clone(), coeffs: m.into_iter().map(|row| row[d].clone()).collect() })
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.try_mul(&other.inv()?)
    }

    /// Complex conjugation, the automorphism ζ ↦ ζ^{n-1}.
    pub fn conj(&self) -> Self {
        let mut out = Self::zero(&self.ctx);
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (slot, p) in out.coeffs.iter_mut().zip(self.ctx.power(-(k as i64))) {
                if !p.is_zero() {
                    *slot += c * p;
                }
            }
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ctx);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for CycNumber {
    /// Canonical literal `[c0, c1, ...] @ zeta(n)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(fmt_rational).collect();
        write!(f, "[{}] @ zeta({})", parts.join(", "), self.ctx.conductor)
    }
}

impl fmt::Debug for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl CycNumber {
    /// Short human form: a plain rational when possible, else the canonical literal.
    pub fn pretty(&self) -> String {
        match self.as_rational() {
            Some(r) => fmt_rational(r),
            None => {
                let mut terms = Vec::new();
                for (k, c) in self.coeffs.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let mon = match k {
                        0 => String::new(),
                        1 => format!("z{}", self.ctx.conductor),
                        _ => format!("z{}^{}", self.ctx.conductor, k),
                    };
                    let term = if k == 0 {
                        fmt_rational(c)
                    } else if c.is_one() {
                        mon
                    } else if (-c).is_one() {
                        format!("-{mon}")
                    } else {
                        format!("{}*{}", fmt_rational(c), mon)
                    };
                    terms.push(term);
                }
                let mut s = String::new();
                for (i, t) in terms.iter().enumerate() {
                    if i > 0 && !t.starts_with('-') {
                        s.push('+');
                    }
                    s.push_str(t);
                }
                s
            }
        }
    }

    pub fn is_negative_rational(&self) -> bool {
        self.as_rational().map(|r| r.is_negative()).unwrap_or(false)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl<'a> $tr<&'a CycNumber> for &'a CycNumber {
            type Output = CycNumber;
            fn $m(self, rhs: &'a CycNumber) -> CycNumber {
                self.$checked(rhs).expect("cyclotomic context mismatch")
            }
        }
        impl $tr<CycNumber> for CycNumber {
            type Output = CycNumber;
            fn $m(self, rhs: CycNumber) -> CycNumber {
                (&self).$checked(&rhs).expect("cyclotomic context mismatch")
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        CycNumber { ctx: self.ctx.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        -&self
    }
}

impl AddAssign<&CycNumber> for CycNumber {
    fn add_assign(&mut self, rhs: &CycNumber) {
        assert_eq!(self.ctx.conductor, rhs.ctx.conductor, "cyclotomic context mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            if !b.is_zero() {
                *a += b;
            }
        }
    }
}

impl SubAssign<&CycNumber> for CycNumber {
    fn sub_assign(&mut self, rhs: &CycNumber) {
        assert_eq!(self.ctx.conductor, rhs.ctx.conductor, "cyclotomic context mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            if !b.is_zero() {
                *a -= b;
            }
        }
    }
}

/// Least common multiple helper used for conductor selection.
pub fn lcm(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(ctx: &Ctx, k: i64) -> CycNumber {
        CycNumber::zeta_pow(ctx, k)
    }

    #[test]
    fn context_degrees() {
        assert_eq!(make_context(1).unwrap().degree(), 1);
        assert_eq!(make_context(4).unwrap().degree(), 2);
        assert_eq!(make_context(12).unwrap().degree(), 4);
        assert!(matches!(make_context(0), Err(Error::ZeroConductor)));
    }

    #[test]
    fn cyclotomic_polys() {
        let ints = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(cyclotomic_polynomial(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(3), ints(&[1, 1, 1]));
        assert_eq!(cyclotomic_polynomial(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(6), ints(&[1, -1, 1]));
    }

    #[test]
    fn reductions() {
        let c4 = make_context(4).unwrap();
        assert_eq!(z(&c4, 2), CycNumber::from_int(&c4, -1));
        let c3 = make_context(3).unwrap();
        let expect = CycNumber::from_int(&c3, -1) - z(&c3, 1);
        assert_eq!(z(&c3, 2), expect);
        assert!(z(&c3, 3).is_one());
    }

    #[test]
    fn field_examples() {
        let c4 = make_context(4).unwrap();
        assert_eq!(&z(&c4, 1) * &z(&c4, 1), CycNumber::from_int(&c4, -1));
        let c3 = make_context(3).unwrap();
        let s = z(&c3, 2) + z(&c3, 1) + CycNumber::one(&c3);
        assert!(s.is_zero());
        assert_eq!(z(&c3, 1).inv().unwrap(), z(&c3, 2));
        assert!(matches!(CycNumber::zero(&c3).inv(), Err(Error::DivisionByZero)));
    }

    #[test]
    fn context_mismatch_is_error() {
        let c3 = make_context(3).unwrap();
        let c4 = make_context(4).unwrap();
        assert!(matches!(
            CycNumber::one(&c3).try_add(&CycNumber::one(&c4)),
            Err(Error::ContextMismatch(3, 4))
        ));
    }

    #[test]
    fn conj_is_inverse_on_roots() {
        let c = make_context(12).unwrap();
        for k in 0..12 {
            assert_eq!(z(&c, k).conj(), z(&c, -k));
        }
    }

    #[test]
    fn display_canonical() {
        let c3 = make_context(3).unwrap();
        assert_eq!(z(&c3, 2).to_string(), "[-1, -1] @ zeta(3)");
        assert_eq!(CycNumber::from_ratio(&c3, 1, 2).to_string(), "[1/2, 0] @ zeta(3)");
    }
}
