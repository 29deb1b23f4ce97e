//! Partition functions from dual (occupation-number) variables.
//!
//! Once the phase integrals of the time-sliced coherent-state integral are
//! done, every slice carries the same occupation number `m` and
//!
//! ```text
//! Z^(N) = Σ_m Π_k [1 - Δ ℋ(m)]  →  Σ_m e^{-β ℋ(m)}   (N → ∞).
//! ```
//!
//! This module evaluates that sum for a Laguerre symbol ([`partition_dual_h`]),
//! for the off-diagonal `H`-symbol ([`partition_dual_offdiag`]), for the three
//! textbook actions that get it wrong ([`wrong_action_partition`]), and the
//! Gaussian determinants of the harmonic oscillator.
//!
//! All sums run in log space with compensated accumulation and stop by the
//! rule in [`crate::numeric::sum_positive_series`].

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numeric::{sum_positive_series, TailSum};
use crate::ordering::{factorial, rational_to_f64};
use crate::symbols::{h_symbol_q, laguerre_coefficients, NumberSymbol, EXACT_EVAL_LIMIT};

pub use crate::numeric::TailPolicy;

/// Number of time slices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slices {
    Finite(u64),
    Continuum,
}

impl fmt::Display for Slices {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slices::Finite(n) => write!(f, "{n}"),
            Slices::Continuum => write!(f, "continuum"),
        }
    }
}

/// Which symbol a discrete scheme is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolKind {
    /// Normal-ordered symbol between neighbouring slices.
    HOffDiagonal,
    /// Normal-ordered symbol with both arguments on one slice (action I).
    HForcedDiagonal,
    /// P-representation symbol, diagonal in the slice.
    HDiagonal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteScheme {
    slices: Slices,
    beta: f64,
    symbol_kind: SymbolKind,
}

impl DiscreteScheme {
    pub fn new(slices: Slices, beta: f64, symbol_kind: SymbolKind) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::Domain(format!("beta must be positive, got {beta}")));
        }
        if slices == Slices::Finite(0) {
            return Err(Error::Domain("a scheme needs at least one slice".into()));
        }
        Ok(Self {
            slices,
            beta,
            symbol_kind,
        })
    }

    pub fn continuum(beta: f64, symbol_kind: SymbolKind) -> Result<Self> {
        Self::new(Slices::Continuum, beta, symbol_kind)
    }

    pub fn slices(&self) -> Slices {
        self.slices
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn symbol_kind(&self) -> SymbolKind {
        self.symbol_kind
    }

    /// `Δ = β/N`, `None` in the continuum.
    pub fn delta(&self) -> Option<f64> {
        match self.slices {
            Slices::Finite(n) => Some(self.beta / n as f64),
            Slices::Continuum => None,
        }
    }

    /// Log of the per-`m` weight for slice energy `energy` (coupling included).
    fn ln_weight(&self, m: u64, energy: f64) -> Result<f64> {
        match self.slices {
            Slices::Continuum => Ok(-self.beta * energy),
            Slices::Finite(n) => {
                let x = self.beta / n as f64 * energy;
                let w = 1.0 - x;
                if w <= 0.0 {
                    return Err(Error::NonPositiveWeight { m, weight: w });
                }
                Ok(n as f64 * (-x).ln_1p())
            }
        }
    }
}

/// Value of `Z` and how it was obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionResult {
    pub value: f64,
    pub log_value: f64,
    pub method: String,
    /// Last retained occupation number, or the expansion order.
    pub cutoff: u64,
    /// Estimated truncation error (absolute).
    pub truncation_bound: f64,
    /// Proven bound on the truncation error, where one is available.
    pub rigorous_bound: Option<f64>,
    pub scheme: Option<DiscreteScheme>,
    /// Contribution of each expansion order, for series methods.
    pub orders: Vec<f64>,
}

impl PartitionResult {
    pub(crate) fn from_tail(method: &str, tail: TailSum, scheme: Option<DiscreteScheme>) -> Self {
        Self {
            value: tail.ln_value.exp(),
            log_value: tail.ln_value,
            method: method.to_string(),
            cutoff: tail.cutoff,
            truncation_bound: tail.tail_bound,
            rigorous_bound: None,
            scheme,
            orders: Vec::new(),
        }
    }

    pub(crate) fn from_value(method: &str, value: f64) -> Self {
        Self {
            value,
            log_value: value.ln(),
            method: method.to_string(),
            cutoff: 0,
            truncation_bound: 0.0,
            rigorous_bound: None,
            scheme: None,
            orders: Vec::new(),
        }
    }

    pub fn relative_difference(&self, other: &Self) -> f64 {
        ((self.log_value - other.log_value).exp_m1()).abs()
    }
}

/// `Σ_m [1 - Δ g ℋ(m)]^N`, or `Σ_m e^{-β g ℋ(m)}` in the continuum.
///
/// Accepts diagonal symbols only: the Laguerre transform of an `h`-symbol, or
/// of a forced-diagonal `H`-symbol for action (I).
pub fn partition_dual_h(
    symbol: &NumberSymbol,
    coupling: f64,
    scheme: &DiscreteScheme,
    tail: &TailPolicy,
) -> Result<PartitionResult> {
    if scheme.symbol_kind == SymbolKind::HOffDiagonal {
        return Err(Error::Domain(
            "off-diagonal H-symbols go through partition_dual_offdiag".into(),
        ));
    }
    if symbol.modes() != 1 {
        return Err(Error::Domain("dual sum needs a single-mode symbol".into()));
    }
    let sum = sum_positive_series(tail, |m| scheme.ln_weight(m, coupling * symbol.eval(m)))?;
    Ok(PartitionResult::from_tail("dual-h", sum, Some(*scheme)))
}

/// `n!/(n-q)!` as the ratio of the slice `ρ`-integral `∫e^{-ρ}ρ^n dρ = n!`
/// to the bond normalisation `m! = (n-q)!`; zero when `m` would be negative.
fn offdiag_slice_factor(n: u64, q: usize) -> f64 {
    if n < q as u64 {
        return 0.0;
    }
    if n <= EXACT_EVAL_LIMIT {
        let ratio = factorial(n as usize) / factorial(n as usize - q);
        return rational_to_f64(&BigRational::from_integer(ratio));
    }
    (0..q as u64).map(|j| ((n - j) as f64).ln()).sum::<f64>().exp()
}

/// Dual treatment of the normal-ordered `H`-symbol of `Σ_q g_q (b†)^q b^q`.
///
/// The slice weight `1 - Δ H(z_k*, z_{k+1})` is expanded in binary dual
/// variables `l_k^{(q)}`; the phase integrals fix `n = m_k + Σ_q q l_k^{(q)}`
/// and, to the order kept in a slice, at most one `l_k^{(q)}` is one. Each
/// slice then contributes `1 - Δ Σ_q g_q n!/(n-q)!`.
pub fn partition_dual_offdiag(
    terms: &[(usize, f64)],
    scheme: &DiscreteScheme,
    tail: &TailPolicy,
) -> Result<PartitionResult> {
    if scheme.symbol_kind != SymbolKind::HOffDiagonal {
        return Err(Error::Domain("scheme must use the off-diagonal H-symbol".into()));
    }
    if terms.is_empty() {
        return Err(Error::Domain("at least one (q, g) term is required".into()));
    }
    let sum = sum_positive_series(tail, |n| {
        let energy: f64 = terms.iter().map(|&(q, g)| g * offdiag_slice_factor(n, q)).sum();
        scheme.ln_weight(n, energy)
    })?;
    Ok(PartitionResult::from_tail("dual-H", sum, Some(*scheme)))
}

/// Textbook discretisations that fail to reproduce `Tr e^{-βH_q}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WrongAction {
    /// Forced-diagonal `H`-symbol with the discrete symplectic term.
    I,
    /// Continuum polar action with the `H`-symbol.
    II,
    /// Continuum polar action with the `h`-symbol.
    III,
}

impl WrongAction {
    pub const ALL: [WrongAction; 3] = [WrongAction::I, WrongAction::II, WrongAction::III];
}

/// Spectrum assigned to level `n` of `H_q / g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EnergyModel {
    /// `n!/(n-q)!`
    Exact,
    /// `(n+q)!/n!`
    ActionI,
    /// `n^q`
    ActionII,
    /// `(-1)^q q! L_q(n)`
    ActionIII,
}

impl From<WrongAction> for EnergyModel {
    fn from(w: WrongAction) -> Self {
        match w {
            WrongAction::I => EnergyModel::ActionI,
            WrongAction::II => EnergyModel::ActionII,
            WrongAction::III => EnergyModel::ActionIII,
        }
    }
}

impl EnergyModel {
    pub const ALL: [EnergyModel; 4] = [
        EnergyModel::Exact,
        EnergyModel::ActionI,
        EnergyModel::ActionII,
        EnergyModel::ActionIII,
    ];

    pub fn energy_exact(self, q: usize, n: u64) -> BigRational {
        let int = |v: BigInt| BigRational::from_integer(v);
        match self {
            EnergyModel::Exact => {
                if n < q as u64 {
                    BigRational::zero()
                } else {
                    int((0..q as u64).fold(BigInt::one(), |acc, j| acc * BigInt::from(n - j)))
                }
            }
            EnergyModel::ActionI => {
                int((1..=q as u64).fold(BigInt::one(), |acc, j| acc * BigInt::from(n + j)))
            }
            EnergyModel::ActionII => int(BigInt::from(n).pow(q as u32)),
            EnergyModel::ActionIII => {
                let scale = int(factorial(q)) * if q % 2 == 1 { -BigRational::one() } else { BigRational::one() };
                let x = BigRational::from_integer(BigInt::from(n));
                laguerre_coefficients(q)
                    .iter()
                    .rev()
                    .fold(BigRational::zero(), |acc, c| acc * &x + c)
                    * scale
            }
        }
    }

    pub fn energy(self, q: usize, n: u64) -> f64 {
        if n <= EXACT_EVAL_LIMIT {
            return rational_to_f64(&self.energy_exact(q, n));
        }
        let x = n as f64;
        match self {
            EnergyModel::Exact => (0..q).map(|j| x - j as f64).product(),
            EnergyModel::ActionI => (1..=q).map(|j| x + j as f64).product(),
            EnergyModel::ActionII => x.powi(q as i32),
            EnergyModel::ActionIII => {
                let h = h_symbol_q(q);
                h.evaluate(&[x], &[0.0])
            }
        }
    }
}

/// `Σ_n e^{-βg E(n)}` for one of the wrong actions.
pub fn wrong_action_partition(
    variant: WrongAction,
    q: usize,
    beta_g: f64,
    tail: &TailPolicy,
) -> Result<PartitionResult> {
    let model = EnergyModel::from(variant);
    let sum = sum_positive_series(tail, |n| Ok(-beta_g * model.energy(q, n)))?;
    let name = match variant {
        WrongAction::I => "wrong-I",
        WrongAction::II => "wrong-II",
        WrongAction::III => "wrong-III",
    };
    Ok(PartitionResult::from_tail(name, sum, None))
}

/// Zero levels and ground-state degeneracy of an energy model, counted exactly
/// over `n ≤ 4q + 20` (beyond every Laguerre root, all models increase).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelCount {
    pub zeros: usize,
    pub ground_states: usize,
}

pub fn level_count(model: EnergyModel, q: usize) -> LevelCount {
    let energies: Vec<BigRational> = (0..=(4 * q as u64 + 20))
        .map(|n| model.energy_exact(q, n))
        .collect();
    let min = energies.iter().min().cloned().unwrap_or_else(BigRational::zero);
    LevelCount {
        zeros: energies.iter().filter(|e| e.is_zero()).count(),
        ground_states: energies.iter().filter(|&e| *e == min).count(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Figure2Row {
    pub n: u64,
    pub exact: f64,
    pub action_i: f64,
    pub action_ii: f64,
    pub action_iii: f64,
}

/// Exponents `asinh(βg E(n))` of the exact spectrum and the three wrong
/// actions, for `n = 0..=n_max`.
pub fn figure2_table(q: usize, beta_g: f64, n_max: u64) -> Vec<Figure2Row> {
    let squeeze = |m: EnergyModel, n| (beta_g * m.energy(q, n)).asinh();
    (0..=n_max)
        .map(|n| Figure2Row {
            n,
            exact: squeeze(EnergyModel::Exact, n),
            action_i: squeeze(EnergyModel::ActionI, n),
            action_ii: squeeze(EnergyModel::ActionII, n),
            action_iii: squeeze(EnergyModel::ActionIII, n),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HarmonicAction {
    /// Diagonal `H`-symbol: `M = 1 - shift + Δg`.
    ActionI,
    /// Off-diagonal `H`-symbol: `M = 1 - (1 - Δg) shift`.
    Correct,
}

/// Determinant of the periodic two-band matrix of the harmonic oscillator.
///
/// Action (I) gives `(1+Δg)^N - 1`, the correct action `1 - (1-Δg)^N`; the
/// Gaussian integral equals `1/det`.
pub fn harmonic_determinant(action: HarmonicAction, slices: u64, delta_g: f64) -> Result<f64> {
    if slices == 0 {
        return Err(Error::Domain("at least one slice is required".into()));
    }
    if delta_g < 0.0 {
        return Err(Error::Domain(format!("Δg must be non-negative, got {delta_g}")));
    }
    let n = slices as f64;
    match action {
        HarmonicAction::ActionI => Ok((n * delta_g.ln_1p()).exp_m1()),
        HarmonicAction::Correct => {
            if delta_g >= 1.0 {
                return Err(Error::Domain(format!(
                    "correct action needs Δg < 1, got {delta_g}"
                )));
            }
            Ok(-(n * (-delta_g).ln_1p()).exp_m1())
        }
    }
}

/// Gaussian path-integral value `1/det M`.
pub fn harmonic_partition(action: HarmonicAction, slices: u64, delta_g: f64) -> Result<f64> {
    harmonic_determinant(action, slices, delta_g).map(|d| 1.0 / d)
}

/// One row of a finite-`N` convergence scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub slices: Slices,
    pub value: f64,
    pub abs_error: f64,
    /// `error(N) / error(2N)` when `2N` is part of the scan.
    pub ratio: Option<f64>,
}

/// Evaluates the dual sum at each `N` and against the continuum value.
/// `slices` must be strictly increasing.
pub fn convergence_scan(
    symbol: &NumberSymbol,
    coupling: f64,
    beta: f64,
    slices: &[u64],
    tail: &TailPolicy,
) -> Result<Vec<ConvergenceRow>> {
    if slices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("slice counts must be strictly increasing".into()));
    }
    let limit = partition_dual_h(
        symbol,
        coupling,
        &DiscreteScheme::continuum(beta, SymbolKind::HDiagonal)?,
        tail,
    )?;
    let mut rows = Vec::with_capacity(slices.len() + 1);
    for &n in slices {
        let scheme = DiscreteScheme::new(Slices::Finite(n), beta, SymbolKind::HDiagonal)?;
        let r = partition_dual_h(symbol, coupling, &scheme, tail)?;
        rows.push(ConvergenceRow {
            slices: Slices::Finite(n),
            value: r.value,
            abs_error: (r.value - limit.value).abs(),
            ratio: None,
        });
    }
    for i in 0..rows.len() {
        if let Slices::Finite(n) = rows[i].slices {
            if let Some(j) = slices.iter().position(|&m| m == 2 * n) {
                rows[i].ratio = Some(rows[i].abs_error / rows[j].abs_error);
            }
        }
    }
    rows.push(ConvergenceRow {
        slices: Slices::Continuum,
        value: limit.value,
        abs_error: 0.0,
        ratio: None,
    });
    Ok(rows)
}

/// `Σ_n (1-Δg)^{nN}`: the dual sum of the re-exponentiated off-diagonal
/// harmonic symbol. Agrees with `1/det` of the correct action at every `N`.
pub fn harmonic_dual_exponentiated(slices: u64, delta_g: f64, tail: &TailPolicy) -> Result<f64> {
    if !(0.0..1.0).contains(&delta_g) || delta_g == 0.0 {
        return Err(Error::Domain(format!("needs 0 < Δg < 1, got {delta_g}")));
    }
    let per_level = slices as f64 * (-delta_g).ln_1p();
    let sum = sum_positive_series(tail, |n| Ok(n as f64 * per_level))?;
    Ok(sum.ln_value.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{h_symbol_forced_diagonal_q, laguerre_transform};

    fn tail() -> TailPolicy {
        TailPolicy::default()
    }

    fn continuum() -> DiscreteScheme {
        DiscreteScheme::continuum(1.0, SymbolKind::HDiagonal).unwrap()
    }

    #[test]
    fn geometric_series_for_q1() {
        let sym = laguerre_transform(&h_symbol_q(1)).unwrap();
        let z = partition_dual_h(&sym, 1.0, &continuum(), &tail()).unwrap();
        assert!((z.value - 1.581_976_706_869_326_4).abs() < 1e-14);
        assert!(z.truncation_bound < 1e-14);
    }

    #[test]
    fn q4_matches_direct_sum() {
        let sym = laguerre_transform(&h_symbol_q(4)).unwrap();
        let z = partition_dual_h(&sym, 1.0, &continuum(), &tail()).unwrap();
        let direct = 4.0 + (1..40u64)
            .map(|n| (-(((n + 1) * (n + 2) * (n + 3) * (n + 4)) as f64)).exp())
            .sum::<f64>()
            + (-24f64).exp();
        assert!(((z.value - direct) / direct).abs() < 1e-15);
    }

    #[test]
    fn offdiag_matches_dual_h() {
        let scheme = DiscreteScheme::continuum(1.0, SymbolKind::HOffDiagonal).unwrap();
        let a = partition_dual_offdiag(&[(4, 1.0)], &scheme, &tail()).unwrap();
        let sym = laguerre_transform(&h_symbol_q(4)).unwrap();
        let b = partition_dual_h(&sym, 1.0, &continuum(), &tail()).unwrap();
        assert!(a.relative_difference(&b) < 1e-12);
        let q1 = partition_dual_offdiag(&[(1, 1.0)], &scheme, &tail()).unwrap();
        assert!((q1.value - 1.0 / (1.0 - (-1f64).exp())).abs() < 1e-14);
    }

    #[test]
    fn offdiag_mixture() {
        let scheme = DiscreteScheme::continuum(1.0, SymbolKind::HOffDiagonal).unwrap();
        let z = partition_dual_offdiag(&[(1, 1.0), (2, 0.5)], &scheme, &tail()).unwrap();
        // Σ_n exp(-(n + n(n-1)/2)), 40 digits
        assert!((z.value - 1.420_190_968_307_003_324_458_03).abs() < 1e-14);
    }

    #[test]
    fn scheme_kind_is_enforced() {
        let sym = laguerre_transform(&h_symbol_q(1)).unwrap();
        let off = DiscreteScheme::continuum(1.0, SymbolKind::HOffDiagonal).unwrap();
        assert!(partition_dual_h(&sym, 1.0, &off, &tail()).is_err());
        assert!(partition_dual_offdiag(&[(1, 1.0)], &continuum(), &tail()).is_err());
        assert!(DiscreteScheme::new(Slices::Finite(0), 1.0, SymbolKind::HDiagonal).is_err());
        assert!(DiscreteScheme::new(Slices::Finite(4), 0.0, SymbolKind::HDiagonal).is_err());
    }

    #[test]
    fn negative_weight_reports_level() {
        let sym = laguerre_transform(&h_symbol_q(2)).unwrap();
        let scheme = DiscreteScheme::new(Slices::Finite(2), 1.0, SymbolKind::HDiagonal).unwrap();
        // Δ = 1/2 and ℋ(2) = 2 make the m = 2 weight vanish
        let err = partition_dual_h(&sym, 1.0, &scheme, &tail()).unwrap_err();
        assert!(matches!(err, Error::NonPositiveWeight { m: 2, .. }));
    }

    #[test]
    fn forced_diagonal_symbol_is_action_one() {
        let sym = laguerre_transform(&h_symbol_forced_diagonal_q(2)).unwrap();
        let scheme = DiscreteScheme::continuum(0.7, SymbolKind::HForcedDiagonal).unwrap();
        let dual = partition_dual_h(&sym, 1.0, &scheme, &tail()).unwrap();
        let closed = wrong_action_partition(WrongAction::I, 2, 0.7, &tail()).unwrap();
        assert!(dual.relative_difference(&closed) < 1e-14);
    }

    #[test]
    fn wrong_action_examples() {
        let z1 = wrong_action_partition(WrongAction::I, 1, 1.0, &tail()).unwrap();
        assert!((z1.value - 1.0 / (1f64.exp() - 1.0)).abs() < 1e-14);
        let z3 = wrong_action_partition(WrongAction::III, 1, 1.0, &tail()).unwrap();
        // -L_1(n) = n - 1
        assert!((z3.value - 1f64.exp() / (1.0 - (-1f64).exp())).abs() < 1e-13);
        let e: Vec<_> = (0..4).map(|n| EnergyModel::ActionII.energy(4, n)).collect();
        assert_eq!(e, vec![0.0, 1.0, 16.0, 81.0]);
    }

    #[test]
    fn level_counts() {
        for q in 1..=8 {
            let exact = level_count(EnergyModel::Exact, q);
            assert_eq!(exact, LevelCount { zeros: q, ground_states: q });
            if q >= 2 {
                for m in [EnergyModel::ActionI, EnergyModel::ActionII, EnergyModel::ActionIII] {
                    let c = level_count(m, q);
                    assert_ne!(c.zeros, q, "{m:?} q={q}");
                    assert_ne!(c.ground_states, q, "{m:?} q={q}");
                }
            }
        }
        assert_eq!(level_count(EnergyModel::ActionI, 4).zeros, 0);
        assert_eq!(level_count(EnergyModel::ActionII, 4).zeros, 1);
    }

    #[test]
    fn figure2_rows() {
        let rows = figure2_table(4, 1.0, 10);
        for r in &rows[..4] {
            assert_eq!(r.exact, 0.0);
        }
        let r0 = rows[0];
        assert_eq!(r0.action_i, 24f64.asinh());
        assert_eq!(r0.action_ii, 0.0);
        assert_eq!(r0.action_iii, 24f64.asinh());
        let q1 = figure2_table(1, 1.0, 1);
        assert_eq!(q1[1].exact, 1f64.asinh());
    }

    #[test]
    fn harmonic_determinants() {
        assert_eq!(harmonic_determinant(HarmonicAction::ActionI, 1, 0.0).unwrap(), 0.0);
        assert_eq!(harmonic_determinant(HarmonicAction::Correct, 1, 0.0).unwrap(), 0.0);
        assert!(harmonic_determinant(HarmonicAction::Correct, 4, 1.0).is_err());
        let n = 1u64 << 20;
        let d = 1.0 / n as f64;
        let a = harmonic_determinant(HarmonicAction::ActionI, n, d).unwrap();
        assert!((a - (1f64.exp() - 1.0)).abs() < 1e-5);
        let c = harmonic_determinant(HarmonicAction::Correct, n, d).unwrap();
        assert!((c - (1.0 - (-1f64).exp())).abs() < 1e-6);
    }

    #[test]
    fn exponentiated_dual_sum_is_inverse_determinant() {
        for n in [2u64, 3, 64, 1000] {
            let d = 1.0 / n as f64;
            let dual = harmonic_dual_exponentiated(n, d, &tail()).unwrap();
            let det = harmonic_partition(HarmonicAction::Correct, n, d).unwrap();
            assert!(((dual - det) / det).abs() < 1e-12, "N = {n}");
        }
    }
}
