//! Exact combinatorics for reordering bosonic operators.
//!
//! Three families of single-mode operators are related here:
//!
//! * normal ordered powers `(b†)^q b^q`,
//! * powers of the number operator `n^q`,
//! * anti-normal ordered powers `b^r (b†)^r`.
//!
//! All coefficients are exact rationals. Coefficient vectors are indexed by
//! power: entry `r` always multiplies the `r`-th power or the `r`-th ordered
//! product, never a reversed index.

use std::fmt;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub mod fock;

/// Triangular table of Stirling numbers, grown row by row under a write lock.
///
/// Rows are pushed only once they are complete, so a reader holding the read
/// lock never observes a partial row.
struct StirlingTable {
    rows: RwLock<Vec<Vec<BigInt>>>,
    next_row: fn(&[BigInt], usize) -> Vec<BigInt>,
}

impl StirlingTable {
    const fn new(next_row: fn(&[BigInt], usize) -> Vec<BigInt>) -> Self {
        Self {
            rows: RwLock::new(Vec::new()),
            next_row,
        }
    }

    fn get(&self, n: usize, k: usize) -> BigInt {
        {
            let rows = self.rows.read().expect("stirling table poisoned");
            if let Some(row) = rows.get(n) {
                return row[k].clone();
            }
        }
        let mut rows = self.rows.write().expect("stirling table poisoned");
        if rows.is_empty() {
            rows.push(vec![BigInt::one()]);
        }
        while rows.len() <= n {
            let m = rows.len() - 1;
            let row = (self.next_row)(&rows[m], m);
            rows.push(row);
        }
        rows[n][k].clone()
    }
}

// s(m+1, k) = s(m, k-1) - m s(m, k)
fn first_kind_row(prev: &[BigInt], m: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::zero(); m + 2];
    for (k, slot) in row.iter_mut().enumerate() {
        let mut v = BigInt::zero();
        if k >= 1 {
            v += &prev[k - 1];
        }
        if k <= m {
            v -= &prev[k] * BigInt::from(m);
        }
        *slot = v;
    }
    row
}

// S(m+1, k) = k S(m, k) + S(m, k-1)
fn second_kind_row(prev: &[BigInt], m: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::zero(); m + 2];
    for (k, slot) in row.iter_mut().enumerate() {
        let mut v = BigInt::zero();
        if k >= 1 {
            v += &prev[k - 1];
        }
        if k <= m {
            v += &prev[k] * BigInt::from(k);
        }
        *slot = v;
    }
    row
}

static FIRST_KIND: StirlingTable = StirlingTable::new(first_kind_row);
static SECOND_KIND: StirlingTable = StirlingTable::new(second_kind_row);

/// Signed Stirling number of the first kind, `(x)_n = Σ_k s(n,k) x^k`.
pub fn stirling_first_signed(n: usize, k: usize) -> Result<BigInt> {
    if k > n {
        return Err(Error::Domain(format!("stirling s({n},{k}) requires k <= n")));
    }
    Ok(FIRST_KIND.get(n, k))
}

/// Stirling number of the second kind, the number of partitions of `n`
/// labelled objects into `k` non-empty blocks.
pub fn stirling_second(n: usize, k: usize) -> Result<BigInt> {
    if k > n {
        return Err(Error::Domain(format!("stirling S({n},{k}) requires k <= n")));
    }
    Ok(SECOND_KIND.get(n, k))
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, j| acc * BigInt::from(j))
}

pub(crate) fn trim(coeffs: &mut Vec<BigRational>) {
    while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
    if coeffs.is_empty() {
        coeffs.push(BigRational::zero());
    }
}

pub(crate) fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Polynomial in the number operator `n`, `Σ_r c_r n^r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NumberPoly {
    coeffs: Vec<BigRational>,
}

impl NumberPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        trim(&mut coeffs);
        Self { coeffs }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// `n^q`
    pub fn power(q: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); q + 1];
        coeffs[q] = BigRational::one();
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_int(&self, n: i64) -> BigRational {
        self.eval(&BigRational::from_integer(n.into()))
    }

    /// Horner evaluation in floating point.
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + rational_to_f64(c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|r| {
                let a = self.coeffs.get(r).cloned().unwrap_or_else(BigRational::zero);
                let b = other.coeffs.get(r).cloned().unwrap_or_else(BigRational::zero);
                a + b
            })
            .collect();
        Self::new(coeffs)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::new(coeffs)
    }
}

impl fmt::Display for NumberPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(r, c)| format!("({})·n^{r}", fmt_rational(c)))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Which product a coefficient index `r` refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OperatorOrder {
    /// `(b†)^r b^r`
    Normal,
    /// `b^r (b†)^r`
    AntiNormal,
}

/// `Σ_r c_r (b†)^r b^r` or `Σ_r c_r b^r (b†)^r`, depending on the ordering tag.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderedPoly {
    ordering: OperatorOrder,
    coeffs: Vec<BigRational>,
}

impl OrderedPoly {
    pub fn new(ordering: OperatorOrder, mut coeffs: Vec<BigRational>) -> Self {
        trim(&mut coeffs);
        Self { ordering, coeffs }
    }

    pub fn ordering(&self) -> OperatorOrder {
        self.ordering
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Rewrites the ordered products in terms of `n`: `(b†)^r b^r` is the falling
    /// factorial `n(n-1)…(n-r+1)`, `b^r (b†)^r` the rising one `(n+1)…(n+r)`.
    pub fn to_number_poly(&self) -> NumberPoly {
        let mut total = NumberPoly::constant(BigRational::zero());
        for (r, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let product = (0..r).fold(NumberPoly::constant(BigRational::one()), |acc, j| {
                let shift = match self.ordering {
                    OperatorOrder::Normal => -(j as i64),
                    OperatorOrder::AntiNormal => j as i64 + 1,
                };
                acc.mul(&NumberPoly::from_integers(&[shift, 1]))
            });
            total = total.add(&product.scale(c));
        }
        total
    }
}

/// `(b†)^q b^q = n(n-1)…(n-q+1) = Σ_r s(q,r) n^r`.
pub fn normal_to_number(q: usize) -> NumberPoly {
    let coeffs = (0..=q)
        .map(|r| BigRational::from_integer(FIRST_KIND.get(q, r)))
        .collect();
    NumberPoly::new(coeffs)
}

/// Anti-normal ordering of a number-operator polynomial, termwise via
/// `n^q = Σ_r (-1)^{q+r} S(q+1, r+1) b^r (b†)^r`.
pub fn number_to_antinormal(p: &NumberPoly) -> OrderedPoly {
    let mut coeffs = vec![BigRational::zero(); p.degree() + 1];
    for (q, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (r, slot) in coeffs.iter_mut().enumerate().take(q + 1) {
            let mut s = BigRational::from_integer(SECOND_KIND.get(q + 1, r + 1));
            if (q + r) % 2 == 1 {
                s = -s;
            }
            *slot += c * s;
        }
    }
    OrderedPoly::new(OperatorOrder::AntiNormal, coeffs)
}

/// Normal ordering of a number-operator polynomial, `n^q = Σ_r S(q,r) (b†)^r b^r`.
pub fn number_to_normal(p: &NumberPoly) -> OrderedPoly {
    let mut coeffs = vec![BigRational::zero(); p.degree() + 1];
    for (q, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (r, slot) in coeffs.iter_mut().enumerate().take(q + 1) {
            *slot += c * BigRational::from_integer(SECOND_KIND.get(q, r));
        }
    }
    OrderedPoly::new(OperatorOrder::Normal, coeffs)
}

/// Closed form `(b†)^q b^q = Σ_r (-1)^{r+q} (q!)² / ((r!)² (q-r)!) b^r (b†)^r`.
pub fn normal_to_antinormal(q: usize) -> OrderedPoly {
    let qf = factorial(q);
    let coeffs = (0..=q)
        .map(|r| {
            let rf = factorial(r);
            let num = &qf * &qf;
            let den = &rf * &rf * factorial(q - r);
            let c = BigRational::new(num, den);
            if (r + q) % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect();
    OrderedPoly::new(OperatorOrder::AntiNormal, coeffs)
}
