//! Integer matrix oracle for single-mode ordering identities.
//!
//! Works in the monomial basis `|n⟩ ↦ z^n`, where `b` acts as `d/dz` and `b†`
//! as multiplication by `z`. This is a similarity transform of the usual Fock
//! matrices, so every operator built from `b` and `b†` has the same diagonal,
//! but all entries are integers and products stay exact.
//!
//! On a space truncated at dimension `d`, the raising matrix drops `z^{d-1}`;
//! products of degree `k` are therefore correct on the first `d - k` states.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{NumberPoly, OperatorOrder, OrderedPoly};

#[derive(Debug, Clone, PartialEq)]
pub struct RationalMatrix {
    dim: usize,
    entries: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![BigRational::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = BigRational::one();
        }
        m
    }

    /// `b`: `z^n ↦ n z^{n-1}`.
    pub fn lowering(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for n in 1..dim {
            m.entries[(n - 1) * dim + n] = BigRational::from_integer(BigInt::from(n));
        }
        m
    }

    /// `b†`: `z^n ↦ z^{n+1}`, truncated at the top.
    pub fn raising(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for n in 0..dim.saturating_sub(1) {
            m.entries[(n + 1) * dim + n] = BigRational::one();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &BigRational {
        &self.entries[row * self.dim + col]
    }

    pub fn mul(&self, other: &Self) -> Self {
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = &self.entries[i * d + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let b = &other.entries[k * d + j];
                    if !b.is_zero() {
                        out.entries[i * d + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::identity(self.dim), |acc, _| acc.mul(self))
    }

    pub fn add_scaled(&mut self, other: &Self, c: &BigRational) {
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a += b * c;
        }
    }

    /// True when the leading `k × k` blocks agree entry by entry.
    pub fn agrees_on_leading_block(&self, other: &Self, k: usize) -> bool {
        (0..k).all(|i| (0..k).all(|j| self.get(i, j) == other.get(i, j)))
    }
}

/// `(b†)^q b^q` built purely from matrix products.
pub fn normal_power_matrix(q: usize, dim: usize) -> RationalMatrix {
    RationalMatrix::raising(dim)
        .pow(q)
        .mul(&RationalMatrix::lowering(dim).pow(q))
}

pub fn ordered_poly_matrix(p: &OrderedPoly, dim: usize) -> RationalMatrix {
    let lower = RationalMatrix::lowering(dim);
    let raise = RationalMatrix::raising(dim);
    let mut out = RationalMatrix::zeros(dim);
    for (r, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let term = match p.ordering() {
            OperatorOrder::Normal => raise.pow(r).mul(&lower.pow(r)),
            OperatorOrder::AntiNormal => lower.pow(r).mul(&raise.pow(r)),
        };
        out.add_scaled(&term, c);
    }
    out
}

pub fn number_poly_matrix(p: &NumberPoly, dim: usize) -> RationalMatrix {
    let number = RationalMatrix::raising(dim).mul(&RationalMatrix::lowering(dim));
    let mut out = RationalMatrix::zeros(dim);
    for (r, c) in p.coeffs().iter().enumerate() {
        if !c.is_zero() {
            out.add_scaled(&number.pow(r), c);
        }
    }
    out
}
