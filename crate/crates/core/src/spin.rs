//! Spin partition functions through the two-boson (Schwinger) representation
//! `S_z = ħ(n₁ − n₂)/2`, `S_+ = ħ b₁† b₂` on the sector `n₁ + n₂ = 2S`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::dual_eval::PartitionResult;
use crate::error::{Error, Result};
use crate::numeric::LogSum;
use nalgebra::DMatrix;

use crate::oracle::{spin_matrix, Axis, DenseOperator, DiagonalTerm, FockSpace, HamiltonianSpec};
use crate::ordering::{number_to_antinormal, number_to_normal, rational_to_f64, NumberPoly};
use crate::symbols::{laguerre_transform, SymbolPoly};
use crate::worldline::dyson_partition;

/// Non-negative half-integer, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt {
    twice: u32,
}

impl HalfInt {
    pub fn from_twice(twice: u32) -> Self {
        Self { twice }
    }

    pub fn twice(self) -> u32 {
        self.twice
    }

    pub fn value(self) -> f64 {
        f64::from(self.twice) / 2.0
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl FromStr for HalfInt {
    type Err = Error;

    /// Accepts `"3/2"`, `"1.5"` or `"2"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Domain(format!("not a non-negative half-integer: {s:?}"));
        if let Some((num, den)) = s.split_once('/') {
            let num: u32 = num.trim().parse().map_err(|_| bad())?;
            return match den.trim() {
                "1" => Ok(Self::from_twice(num.checked_mul(2).ok_or_else(bad)?)),
                "2" => Ok(Self::from_twice(num)),
                _ => Err(bad()),
            };
        }
        let x: f64 = s.parse().map_err(|_| bad())?;
        let twice = 2.0 * x;
        if !(twice >= 0.0) || twice.fract() != 0.0 || twice > f64::from(u32::MAX) {
            return Err(bad());
        }
        Ok(Self::from_twice(twice as u32))
    }
}

/// Two-mode sector `n₁ + n₂ = 2S`, ordered `n₁ = 2S, …, 0`.
pub fn schwinger_sector(spin: HalfInt) -> FockSpace {
    FockSpace::Sector {
        sites: 2,
        total: spin.twice(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpinHamiltonian {
    /// `f(S_z)` with `f` a polynomial in the dimensionful `S_z`.
    Fz(NumberPoly),
    /// `ω S_x`
    X { omega: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpinSpec {
    pub spin: HalfInt,
    pub hbar: f64,
    pub hamiltonian: SpinHamiltonian,
}

/// `((n₁ − n₂)/2)^k` as `(j, l, c)` for `c n₁^j n₂^l`.
fn half_difference_power(k: usize) -> Vec<(usize, usize, BigRational)> {
    let half_k = BigRational::new(BigInt::one(), BigInt::from(2).pow(k as u32));
    let mut binom = BigInt::one();
    let mut out = Vec::with_capacity(k + 1);
    for j in 0..=k {
        let l = k - j;
        let sign = if l % 2 == 0 { 1 } else { -1 };
        out.push((j, l, &half_k * BigRational::from_integer(&binom * sign)));
        binom = binom * BigInt::from(k - j) / BigInt::from(j + 1);
    }
    out
}

fn scaled_coeffs(f: &NumberPoly, hbar: f64) -> Vec<f64> {
    f.coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| rational_to_f64(c) * hbar.powi(k as i32))
        .collect()
}

/// Magnetic quantum numbers `m = S, S−1, …, −S`, matching the sector order.
fn levels(spin: HalfInt) -> impl Iterator<Item = (u64, u64, f64)> {
    let twice = u64::from(spin.twice());
    (0..=twice).rev().map(move |n1| {
        let n2 = twice - n1;
        (n1, n2, (n1 as f64 - n2 as f64) / 2.0)
    })
}

/// `f(ħ(n₁ − n₂)/2)` as a diagonal two-site Hamiltonian.
pub fn schwinger_fz_spec(f: &NumberPoly, hbar: f64) -> HamiltonianSpec {
    let mut spec = HamiltonianSpec::new(2);
    for (k, fk) in scaled_coeffs(f, hbar).into_iter().enumerate() {
        if fk == 0.0 {
            continue;
        }
        for (j, l, c) in half_difference_power(k) {
            spec = spec.with_diagonal(DiagonalTerm {
                coupling: fk * rational_to_f64(&c),
                factors: vec![(0, NumberPoly::power(j)), (1, NumberPoly::power(l))],
            });
        }
    }
    spec
}

/// Energies `f(ħm)` obtained from the anti-normal symbol of
/// `((n₁ − n₂)/2)^k` in both modes and its Laguerre transform.
fn symbol_route_energies(f: &NumberPoly, spin: HalfInt, hbar: f64) -> Result<Vec<f64>> {
    let mut per_power = Vec::new();
    for k in 0..f.coeffs().len() {
        let mut sym = SymbolPoly::zero(2);
        for (j, l, c) in half_difference_power(k) {
            let s1 = SymbolPoly::from_antinormal(2, 0, &number_to_antinormal(&NumberPoly::power(j)))?;
            let s2 = SymbolPoly::from_antinormal(2, 1, &number_to_antinormal(&NumberPoly::power(l)))?;
            sym = sym.add(&s1.mul(&s2).scale(&c));
        }
        per_power.push(laguerre_transform(&sym)?);
    }
    let coeffs = scaled_coeffs(f, hbar);
    Ok(levels(spin)
        .map(|(n1, n2, _)| {
            per_power
                .iter()
                .zip(&coeffs)
                .map(|(sym, fk)| fk * sym.eval_modes(&[n1, n2]))
                .sum()
        })
        .collect())
}

fn boltzmann_sum(energies: impl IntoIterator<Item = f64>, beta: f64) -> f64 {
    let mut acc = LogSum::default();
    for e in energies {
        acc.add_ln(-beta * e);
    }
    acc.ln_total()
}

/// `Σ_{m=-S}^{S} e^{-β f(ħm)}`, computed from the quantum numbers and again
/// through the two-mode symbol; the two must agree to 1e-12.
pub fn spin_partition_z(spec: &SpinSpec, beta: f64) -> Result<PartitionResult> {
    let SpinHamiltonian::Fz(f) = &spec.hamiltonian else {
        return Err(Error::Domain("spin_partition_z needs an f(S_z) Hamiltonian".into()));
    };
    let direct: Vec<f64> = levels(spec.spin)
        .map(|(_, _, m)| f.eval_f64(spec.hbar * m))
        .collect();
    let via_symbol = symbol_route_energies(f, spec.spin, spec.hbar)?;
    let ln_direct = boltzmann_sum(direct.iter().copied(), beta);
    let ln_symbol = boltzmann_sum(via_symbol.iter().copied(), beta);
    if (ln_direct - ln_symbol).exp_m1().abs() > 1e-12 {
        return Err(Error::CrossCheck(format!(
            "quantum-number sum e^{ln_direct} and symbol route e^{ln_symbol} disagree"
        )));
    }
    let mut result = PartitionResult::from_value("spin-z", ln_direct.exp());
    result.log_value = ln_direct;
    result.cutoff = u64::from(spec.spin.twice());
    Ok(result)
}

/// `f(S_z)` as a dense matrix on the `2S+1` spin states.
pub fn fz_matrix(spin: HalfInt, f: &NumberPoly, hbar: f64) -> Result<DenseOperator> {
    let sz = spin_matrix(spin, Axis::Z, hbar);
    DenseOperator::from_matrix(DMatrix::from_fn(sz.nrows(), sz.ncols(), |r, c| {
        if r == c {
            f.eval_f64(sz[(r, c)].re)
        } else {
            0.0
        }
    }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpinXResult {
    pub result: PartitionResult,
    /// Order-2 shell of the jump expansion.
    pub order2: f64,
}

/// `Tr e^{-βωS_x}` from the jump expansion on the Schwinger sector, with
/// bond coupling `ħω/2`.
pub fn spin_partition_x(
    spin: HalfInt,
    omega: f64,
    hbar: f64,
    beta: f64,
    p_max: usize,
) -> Result<SpinXResult> {
    let spec = HamiltonianSpec::new(2).with_bond(0, 1, 0.5 * hbar * omega);
    let mut result = dyson_partition(&spec, beta, p_max, &schwinger_sector(spin))?;
    result.method = "spin-x".into();
    let order2 = result.orders.get(2).copied().unwrap_or(0.0);
    Ok(SpinXResult { result, order2 })
}

#[derive(Debug, Clone, PartialEq)]
pub struct NaiveComparison {
    pub exact: f64,
    /// Same sum with level energies read off the normal-ordered symbol at
    /// integer occupations.
    pub naive: f64,
    pub relative_gap: f64,
    pub agree: bool,
}

const AGREEMENT_TOL: f64 = 1e-12;

/// Exact `Σ e^{-β f(ħm)}` against the naive evaluation in which each level
/// takes the normal-ordered symbol of `f(ħ(n₁ − n₂)/2)` at `ρ = (n₁, n₂)`.
pub fn naive_symbol_spin_z(spin: HalfInt, f: &NumberPoly, hbar: f64, beta: f64) -> Result<NaiveComparison> {
    if !beta.is_finite() || beta < 0.0 {
        return Err(Error::Domain(format!("β must be finite and non-negative, got {beta}")));
    }
    let coeffs = scaled_coeffs(f, hbar);
    let normal_symbol = |p: usize, rho: u64| -> BigRational {
        let ordered = number_to_normal(&NumberPoly::power(p));
        ordered
            .coeffs()
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| {
                acc * BigRational::from_integer(BigInt::from(rho)) + c
            })
    };
    let naive_energies: Vec<f64> = levels(spin)
        .map(|(n1, n2, _)| {
            coeffs
                .iter()
                .enumerate()
                .map(|(k, fk)| {
                    let sym = half_difference_power(k)
                        .into_iter()
                        .fold(BigRational::zero(), |acc, (j, l, c)| {
                            acc + c * normal_symbol(j, n1) * normal_symbol(l, n2)
                        });
                    fk * rational_to_f64(&sym)
                })
                .sum()
        })
        .collect();
    let exact = boltzmann_sum(levels(spin).map(|(_, _, m)| f.eval_f64(hbar * m)), beta).exp();
    let naive = boltzmann_sum(naive_energies, beta).exp();
    let relative_gap = ((naive - exact) / exact).abs();
    Ok(NaiveComparison {
        exact,
        naive,
        relative_gap,
        agree: relative_gap <= AGREEMENT_TOL,
    })
}

/// `η = S(1 + cos θ)`, mapping `cos θ ∈ [−1, 1]` onto `η ∈ [0, 2S]`.
pub fn bloch_eta(spin: HalfInt, cos_theta: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&cos_theta) {
        return Err(Error::Domain(format!("cos θ = {cos_theta} outside [−1, 1]")));
    }
    Ok(spin.value() * (1.0 + cos_theta))
}

/// Inverse of [`bloch_eta`]; needs `S > 0`.
pub fn bloch_cos_theta(spin: HalfInt, eta: f64) -> Result<f64> {
    let s = spin.value();
    if s == 0.0 || !(0.0..=2.0 * s).contains(&eta) {
        return Err(Error::Domain(format!("η = {eta} outside [0, 2S] for S = {spin}")));
    }
    Ok(eta / s - 1.0)
}
