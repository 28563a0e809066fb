//! Dense univariate polynomials in `m` over a generic coefficient ring.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coefficient requirements for polynomials and for generic evaluation of counting
/// formulas.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
    fn from_i64(v: i64) -> Self;

    fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }
}

macro_rules! scalar_prim {
    ($($t:ty),*) => {$(
        impl Scalar for $t {
            fn from_i64(v: i64) -> Self {
                v as $t
            }
        }
    )*};
}
scalar_prim!(i64, i128, u64, f64);

impl Scalar for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
}

impl Scalar for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
}

/// `coeffs[i]` is the coefficient of `m^i`; trailing zeros are trimmed, so the zero
/// polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// The variable `m`.
    pub fn var() -> Self {
        Self::new(vec![T::zero(), T::one()])
    }

    pub fn monomial(c: T, degree: usize) -> Self {
        let mut v = vec![T::zero(); degree + 1];
        v[degree] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coefficient(&self) -> Option<&T> {
        self.coeffs.last()
    }

    /// Highest-degree monomial.
    pub fn leading_term(&self) -> Self {
        match self.degree() {
            None => Self::zero(),
            Some(d) => Self::monomial(self.coeffs[d].clone(), d),
        }
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Polynomial<U> {
        Polynomial::new(self.coeffs.iter().map(f).collect())
    }

    /// Falling factorial `(m + shift)(m + shift - 1) ⋯ (m + shift - j + 1)`.
    pub fn falling(shift: i64, j: usize) -> Self {
        (0..j as i64).fold(Self::one(), |acc, t| {
            acc * Self::new(vec![T::from_i64(shift - t), T::one()])
        })
    }
}

impl<T: Scalar> Zero for Polynomial<T> {
    fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<T: Scalar> One for Polynomial<T> {
    fn one() -> Self {
        Self::constant(T::one())
    }
}

impl<T: Scalar> Scalar for Polynomial<T> {
    fn from_i64(v: i64) -> Self {
        Self::constant(T::from_i64(v))
    }
}

impl<T: Scalar> Add for Polynomial<T> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<T: Scalar> Add for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn add(self, rhs: Self) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let get = |v: &[T], i: usize| v.get(i).cloned().unwrap_or_else(T::zero);
        Polynomial::new(
            (0..n)
                .map(|i| get(&self.coeffs, i) + get(&rhs.coeffs, i))
                .collect(),
        )
    }
}

impl<T: Scalar> Sub for Polynomial<T> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<T: Scalar> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn sub(self, rhs: Self) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let get = |v: &[T], i: usize| v.get(i).cloned().unwrap_or_else(T::zero);
        Polynomial::new(
            (0..n)
                .map(|i| get(&self.coeffs, i) - get(&rhs.coeffs, i))
                .collect(),
        )
    }
}

impl<T: Scalar> Mul for Polynomial<T> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<T: Scalar> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn mul(self, rhs: Self) -> Polynomial<T> {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Polynomial::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Polynomial::new(out)
    }
}

impl<T: Scalar + Neg<Output = T>> Neg for Polynomial<T> {
    type Output = Self;

    fn neg(self) -> Self {
        Polynomial::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl<T: Scalar + fmt::Display + Signed> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = abs.is_one();
            match i {
                0 => write!(f, "{abs}")?,
                1 if unit => write!(f, "m")?,
                1 => write!(f, "{abs}m")?,
                _ if unit => write!(f, "m^{i}")?,
                _ => write!(f, "{abs}m^{i}")?,
            }
        }
        Ok(())
    }
}

impl<T: fmt::Debug> fmt::Debug for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial{:?}", self.coeffs)
    }
}

pub type RationalPolynomial = Polynomial<BigRational>;
pub type IntPolynomial = Polynomial<i128>;

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl IntPolynomial {
    /// Exact conversion to rational coefficients, dividing by `denominator`.
    pub fn to_rational(&self, denominator: i128) -> RationalPolynomial {
        let den = BigInt::from(denominator);
        self.map(|c| BigRational::new(BigInt::from(*c), den.clone()))
    }
}

impl RationalPolynomial {
    /// Value at an integer point, if it is an integer.
    pub fn eval_integer(&self, m: i64) -> Option<BigInt> {
        let v = self.eval(&<BigRational as Scalar>::from_i64(m));
        v.is_integer().then(|| v.to_integer())
    }
}
