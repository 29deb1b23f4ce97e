//! Symbol calculus: `h`-, `H`- and Laguerre symbols.
//!
//! A [`SymbolPoly`] is a phase-space polynomial written in polar variables
//! `z_i = √ρ_i e^{iφ_i}`: each term carries a power of `ρ_i` (possibly
//! half-integer) and an integer winding `k_i` for the factor `e^{i k_i φ_i}`.
//! Coefficients are exact rationals; couplings enter only at evaluation.
//!
//! The Laguerre transform maps a diagonal symbol `h(ρ)` to a function of the
//! occupation number,
//!
//! ```text
//! ℋ(m) = (1/m!) ∫₀^∞ e^{-ρ} ρ^m h(ρ) dρ,
//! ```
//!
//! which sends `ρ^r` to the rising factorial `(m+r)!/m!`. The result is a
//! [`NumberSymbol`].

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numeric::NeumaierSum;
use crate::ordering::{
    self, factorial, normal_to_antinormal, normal_to_number, number_to_antinormal, NumberPoly,
    OperatorOrder, OrderedPoly,
};

/// Largest occupation number evaluated with exact rational arithmetic.
pub const EXACT_EVAL_LIMIT: u64 = 200;

/// Power of `ρ` and winding of `e^{iφ}` for one mode of a monomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ModeFactor {
    /// Twice the power of `ρ`; odd values are half-integer powers.
    pub twice_power: u32,
    pub winding: i32,
}

impl ModeFactor {
    pub fn rho_power(r: u32) -> Self {
        Self {
            twice_power: 2 * r,
            winding: 0,
        }
    }

    pub fn power(&self) -> f64 {
        f64::from(self.twice_power) / 2.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolPoly {
    modes: usize,
    terms: BTreeMap<Vec<ModeFactor>, BigRational>,
}

impl SymbolPoly {
    pub fn zero(modes: usize) -> Self {
        Self {
            modes,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(modes: usize, c: BigRational) -> Self {
        Self::monomial(vec![ModeFactor::default(); modes], c)
    }

    pub fn monomial(factors: Vec<ModeFactor>, c: BigRational) -> Self {
        let mut out = Self::zero(factors.len());
        if !c.is_zero() {
            out.terms.insert(factors, c);
        }
        out
    }

    /// `Σ_r c_r ρ_mode^r` on a space of `modes` modes.
    pub fn from_rho_poly(modes: usize, mode: usize, coeffs: &[BigRational]) -> Self {
        let mut out = Self::zero(modes);
        for (r, c) in coeffs.iter().enumerate() {
            let mut factors = vec![ModeFactor::default(); modes];
            factors[mode] = ModeFactor::rho_power(r as u32);
            out.add_term(factors, c.clone());
        }
        out
    }

    /// Phase-space image of an anti-normal ordered polynomial on one mode:
    /// with `b ↦ z`, `b† ↦ z*` the product `b^r (b†)^r` becomes `ρ^r`.
    pub fn from_antinormal(modes: usize, mode: usize, p: &OrderedPoly) -> Result<Self> {
        if p.ordering() != OperatorOrder::AntiNormal {
            return Err(Error::UnsupportedSymbol(
                "h-symbols are read off anti-normal ordered forms".into(),
            ));
        }
        Ok(Self::from_rho_poly(modes, mode, p.coeffs()))
    }

    fn add_term(&mut self, factors: Vec<ModeFactor>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(factors).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[ModeFactor], &BigRational)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.modes, other.modes, "mode count mismatch");
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero(self.modes);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.modes, other.modes, "mode count mismatch");
        let mut out = Self::zero(self.modes);
        for (ka, va) in &self.terms {
            for (kb, vb) in &other.terms {
                let factors = ka
                    .iter()
                    .zip(kb)
                    .map(|(a, b)| ModeFactor {
                        twice_power: a.twice_power + b.twice_power,
                        winding: a.winding + b.winding,
                    })
                    .collect();
                out.add_term(factors, va * vb);
            }
        }
        out
    }

    /// Every term has total winding zero.
    pub fn is_number_conserving(&self) -> bool {
        self.terms
            .keys()
            .all(|k| k.iter().map(|f| f.winding).sum::<i32>() == 0)
    }

    /// No windings and only integer powers: the diagonal Laguerre transform applies.
    pub fn is_phase_free(&self) -> bool {
        self.terms
            .keys()
            .all(|k| k.iter().all(|f| f.winding == 0 && f.twice_power % 2 == 0))
    }

    /// Real part of the symbol at `(ρ, φ)`; exact for symbols closed under
    /// complex conjugation.
    pub fn evaluate(&self, rho: &[f64], phi: &[f64]) -> f64 {
        assert_eq!(rho.len(), self.modes);
        assert_eq!(phi.len(), self.modes);
        let mut acc = NeumaierSum::default();
        for (k, c) in &self.terms {
            let mut magnitude = ordering::rational_to_f64(c);
            let mut angle = 0.0;
            for (i, f) in k.iter().enumerate() {
                magnitude *= rho[i].powf(f.power());
                angle += f64::from(f.winding) * phi[i];
            }
            acc.add(magnitude * angle.cos());
        }
        acc.total()
    }
}

/// `h`-symbol of `(b†)^q b^q`: `(-1)^q q! L_q(ρ)`.
pub fn h_symbol_q(q: usize) -> SymbolPoly {
    SymbolPoly::from_antinormal(1, 0, &normal_to_antinormal(q))
        .expect("normal_to_antinormal returns anti-normal form")
}

/// Forced-diagonal `H`-symbol of `(b†)^q b^q`: `ρ^q`.
pub fn h_symbol_forced_diagonal_q(q: usize) -> SymbolPoly {
    let mut factors = vec![ModeFactor::default()];
    factors[0] = ModeFactor::rho_power(q as u32);
    SymbolPoly::monomial(factors, BigRational::one())
}

/// Symbol of `b_i† b_j + b_j† b_i`, i.e. `z_i* z_j + z_j* z_i` in polar form.
/// The same for either ordering, since the two modes commute.
pub fn bilinear_hopping_symbol(modes: usize, i: usize, j: usize) -> Result<SymbolPoly> {
    if i == j || i >= modes || j >= modes {
        return Err(Error::Domain(format!(
            "hopping needs two distinct modes below {modes}, got ({i}, {j})"
        )));
    }
    let mut out = SymbolPoly::zero(modes);
    for sign in [1, -1] {
        let mut factors = vec![ModeFactor::default(); modes];
        factors[i] = ModeFactor {
            twice_power: 1,
            winding: -sign,
        };
        factors[j] = ModeFactor {
            twice_power: 1,
            winding: sign,
        };
        out.add_term(factors, BigRational::one());
    }
    Ok(out)
}

/// Coefficients of the Laguerre polynomial `L_q(x) = Σ_r C(q,r) (-1)^r x^r / r!`.
pub fn laguerre_coefficients(q: usize) -> Vec<BigRational> {
    (0..=q)
        .map(|r| {
            let binom = factorial(q) / (factorial(r) * factorial(q - r));
            let c = BigRational::new(binom, factorial(r));
            if r % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect()
}

/// Recognised closed forms of a single-mode [`NumberSymbol`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedForm {
    /// `m!/(m-q)!`, zero for `m < q`.
    FallingFactorial(usize),
    /// `m^q`
    Power(usize),
}

/// `ℋ(m) = Σ_r c_r Π_i (m_i + r_i)!/m_i!`, the output of the Laguerre transform.
#[derive(Debug, Clone, PartialEq)]
pub struct NumberSymbol {
    modes: usize,
    terms: Vec<(Vec<u32>, BigRational)>,
    closed_form: Option<ClosedForm>,
}

fn rising(m: u64, r: u32) -> BigInt {
    (1..=u64::from(r)).fold(BigInt::one(), |acc, j| acc * BigInt::from(m + j))
}

impl NumberSymbol {
    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn terms(&self) -> &[(Vec<u32>, BigRational)] {
        &self.terms
    }

    pub fn closed_form(&self) -> Option<ClosedForm> {
        self.closed_form
    }

    /// Single-mode view: `(r, c_r)` pairs.
    pub fn single_mode_terms(&self) -> Vec<(u32, BigRational)> {
        assert_eq!(self.modes, 1, "single-mode symbol expected");
        self.terms.iter().map(|(r, c)| (r[0], c.clone())).collect()
    }

    pub fn eval_exact_modes(&self, m: &[u64]) -> BigRational {
        assert_eq!(m.len(), self.modes);
        self.terms.iter().fold(BigRational::zero(), |acc, (r, c)| {
            let prod = r
                .iter()
                .zip(m)
                .fold(BigInt::one(), |p, (&ri, &mi)| p * rising(mi, ri));
            acc + c * BigRational::from_integer(prod)
        })
    }

    pub fn eval_exact(&self, m: u64) -> BigRational {
        self.eval_exact_modes(&[m])
    }

    /// Floating-point value; exact rational arithmetic while every occupation
    /// is at most [`EXACT_EVAL_LIMIT`], log-space rising factorials beyond.
    pub fn eval_modes(&self, m: &[u64]) -> f64 {
        if m.iter().all(|&mi| mi <= EXACT_EVAL_LIMIT) {
            return ordering::rational_to_f64(&self.eval_exact_modes(m));
        }
        let mut acc = NeumaierSum::default();
        for (r, c) in &self.terms {
            let cf = ordering::rational_to_f64(c);
            if cf == 0.0 {
                continue;
            }
            let log_rising: f64 = r
                .iter()
                .zip(m)
                .map(|(&ri, &mi)| (1..=u64::from(ri)).map(|j| ((mi + j) as f64).ln()).sum::<f64>())
                .sum();
            acc.add(cf.signum() * (cf.abs().ln() + log_rising).exp());
        }
        acc.total()
    }

    pub fn eval(&self, m: u64) -> f64 {
        self.eval_modes(&[m])
    }

    /// Single-mode symbol rewritten as an exact polynomial in `m`.
    pub fn to_number_poly(&self) -> NumberPoly {
        assert_eq!(self.modes, 1, "single-mode symbol expected");
        let mut coeffs = Vec::new();
        for (r, c) in &self.terms {
            let r = r[0] as usize;
            if coeffs.len() <= r {
                coeffs.resize(r + 1, BigRational::zero());
            }
            coeffs[r] += c;
        }
        OrderedPoly::new(OperatorOrder::AntiNormal, coeffs).to_number_poly()
    }

    fn detect_closed_form(&mut self) {
        if self.modes != 1 {
            return;
        }
        let poly = self.to_number_poly();
        let q = poly.degree();
        self.closed_form = if poly == normal_to_number(q) {
            Some(ClosedForm::FallingFactorial(q))
        } else if poly == NumberPoly::power(q) {
            Some(ClosedForm::Power(q))
        } else {
            None
        };
    }
}

/// Laguerre transform of a phase-free symbol, mode by mode.
pub fn laguerre_transform(h: &SymbolPoly) -> Result<NumberSymbol> {
    if !h.is_phase_free() {
        return Err(Error::UnsupportedSymbol(
            "symbol has windings or half-integer powers; use the jump expansion".into(),
        ));
    }
    let terms = h
        .terms()
        .map(|(k, c)| (k.iter().map(|f| f.twice_power / 2).collect(), c.clone()))
        .collect();
    let mut out = NumberSymbol {
        modes: h.modes(),
        terms,
        closed_form: None,
    };
    out.detect_closed_form();
    Ok(out)
}

/// Anti-normal ordering, `ρ`-substitution and Laguerre transform of a
/// polynomial in `n`; evaluates to `p(m)` for every `m ≥ 0`.
pub fn number_symbol_of_npoly(p: &NumberPoly) -> NumberSymbol {
    let h = SymbolPoly::from_antinormal(1, 0, &number_to_antinormal(p))
        .expect("number_to_antinormal returns anti-normal form");
    laguerre_transform(&h).expect("anti-normal image of a number polynomial is phase free")
}

// Bernoulli terms B_{2k} / (2k (2k-1)) of the Stirling series.
const STIRLING_SERIES: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

fn stirling_main(x: f64) -> f64 {
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln()
}

/// `lnΓ(x) - [(x - ½) ln x - x + ½ ln 2π]` for `x ≥ 1`.
fn stirling_correction(x: f64) -> f64 {
    if x >= 10.0 {
        let inv = 1.0 / x;
        let inv2 = inv * inv;
        let mut power = inv;
        let mut acc = 0.0;
        for c in STIRLING_SERIES {
            acc += c * power;
            power *= inv2;
        }
        acc
    } else {
        statrs::function::gamma::ln_gamma(x) - stirling_main(x)
    }
}

/// `ln γ(ρ, ρ′)`; the large Stirling parts of the three log-gammas are
/// combined analytically so that no cancellation between them occurs.
pub fn ln_gamma_factor(rho: f64, rho_prime: f64) -> Result<f64> {
    if !(rho >= 0.0 && rho_prime >= 0.0) || !rho.is_finite() || !rho_prime.is_finite() {
        return Err(Error::Domain(format!(
            "gamma factor needs finite non-negative arguments, got ({rho}, {rho_prime})"
        )));
    }
    let b = rho + 1.0;
    let c = rho_prime + 1.0;
    let a = 0.5 * (rho + rho_prime) + 1.5;
    let a_minus_b = 0.5 * (rho_prime - rho) + 0.5;
    let a_minus_c = 0.5 * (rho - rho_prime) + 0.5;
    let main = 0.5 * b * (a_minus_b / b).ln_1p() + 0.5 * c * (a_minus_c / c).ln_1p()
        + 0.25 * (b.ln() + c.ln())
        - 0.5;
    Ok(main + stirling_correction(a) - 0.5 * stirling_correction(b) - 0.5 * stirling_correction(c))
}

/// `γ(ρ,ρ′) = Γ((ρ+ρ′)/2 + 3/2) / √(Γ(ρ+1) Γ(ρ′+1))`, computed in log space.
pub fn gamma_factor(rho: f64, rho_prime: f64) -> Result<f64> {
    ln_gamma_factor(rho, rho_prime).map(f64::exp)
}

/// Jump matrix element `√((n_to + 1) n_from)` for one quantum moved from
/// mode `from` to mode `to`.
pub fn jump_element(occupations: &[u32], to: usize, from: usize) -> f64 {
    (f64::from(occupations[to] + 1) * f64::from(occupations[from])).sqrt()
}

/// Laguerre symbol of a hopping term,
/// `J Σ_bonds γ(ρ_i,ρ_i′) γ(ρ_j,ρ_j′) cos(φ_j − φ_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HoppingSymbol {
    modes: usize,
    bonds: Vec<(usize, usize)>,
    coupling: f64,
}

impl HoppingSymbol {
    pub fn new(modes: usize, bonds: Vec<(usize, usize)>, coupling: f64) -> Result<Self> {
        for &(i, j) in &bonds {
            if i == j {
                return Err(Error::Domain(format!("bond ({i}, {j}) joins a site to itself")));
            }
            if i >= modes || j >= modes {
                return Err(Error::Domain(format!("bond ({i}, {j}) outside {modes} sites")));
            }
        }
        Ok(Self {
            modes,
            bonds,
            coupling,
        })
    }

    pub fn bonds(&self) -> &[(usize, usize)] {
        &self.bonds
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn evaluate(&self, rho: &[f64], rho_prime: &[f64], phi: &[f64]) -> Result<f64> {
        if rho.len() != self.modes || rho_prime.len() != self.modes || phi.len() != self.modes {
            return Err(Error::Domain("argument length differs from mode count".into()));
        }
        let mut acc = NeumaierSum::default();
        for &(i, j) in &self.bonds {
            let w = gamma_factor(rho[i], rho_prime[i])? * gamma_factor(rho[j], rho_prime[j])?;
            acc.add(w * (phi[j] - phi[i]).cos());
        }
        Ok(self.coupling * acc.total())
    }

    /// Matrix element of the bond operator for a quantum moving `from → to`.
    pub fn jump_element(&self, occupations: &[u32], to: usize, from: usize) -> f64 {
        jump_element(occupations, to, from)
    }
}
