//! Operator-method references: number-basis sums, truncated Fock spaces with
//! dense diagonalisation, and explicit spin matrices.
//!
//! Nothing here uses symbols or dual variables, so every other module can be
//! checked against it.

use std::collections::HashMap;

use nalgebra::{Complex, DMatrix, SymmetricEigen};

use crate::dual_eval::PartitionResult;
use crate::error::{Error, Result};
use crate::numeric::{sum_positive_series, LogSum, TailPolicy};
use crate::ordering::{rational_to_f64, NumberPoly};
use crate::spin::HalfInt;

/// Basis of occupation-number states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FockSpace {
    /// Every site holds `0..=n_cutoff` bosons.
    Cutoff { sites: usize, n_cutoff: u32 },
    /// All states with `Σ_i n_i = total`.
    Sector { sites: usize, total: u32 },
}

impl FockSpace {
    pub fn sites(&self) -> usize {
        match *self {
            FockSpace::Cutoff { sites, .. } | FockSpace::Sector { sites, .. } => sites,
        }
    }

    /// Basis states in a fixed order. Cutoff spaces run lexicographically
    /// with the last site fastest; sectors put the most bosons on the first
    /// site first, e.g. `(2,0), (1,1), (0,2)`.
    pub fn basis(&self) -> Vec<Vec<u32>> {
        match *self {
            FockSpace::Cutoff { sites, n_cutoff } => {
                let mut out = vec![Vec::new()];
                for _ in 0..sites {
                    out = out
                        .into_iter()
                        .flat_map(|prefix| {
                            (0..=n_cutoff).map(move |n| {
                                let mut s = prefix.clone();
                                s.push(n);
                                s
                            })
                        })
                        .collect();
                }
                if sites == 0 {
                    out.clear();
                }
                out
            }
            FockSpace::Sector { sites, total } => {
                let mut out = Vec::new();
                if sites > 0 {
                    let mut state = vec![0; sites];
                    fill_sector(&mut state, 0, total, &mut out);
                }
                out
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.basis().len()
    }
}

fn fill_sector(state: &mut Vec<u32>, site: usize, remaining: u32, out: &mut Vec<Vec<u32>>) {
    if site + 1 == state.len() {
        state[site] = remaining;
        out.push(state.clone());
        return;
    }
    for n in (0..=remaining).rev() {
        state[site] = n;
        fill_sector(state, site + 1, remaining - n, out);
    }
}

/// `coupling · Π_{(site, p)} p(n_site)`
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalTerm {
    pub coupling: f64,
    pub factors: Vec<(usize, NumberPoly)>,
}

/// `coupling · (b_i† b_j + b_j† b_i)`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bond {
    pub i: usize,
    pub j: usize,
    pub coupling: f64,
}

/// A Hamiltonian that is a polynomial in the number operators plus hopping bonds.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianSpec {
    pub sites: usize,
    pub diagonal: Vec<DiagonalTerm>,
    pub bonds: Vec<Bond>,
}

impl HamiltonianSpec {
    pub fn new(sites: usize) -> Self {
        Self {
            sites,
            diagonal: Vec::new(),
            bonds: Vec::new(),
        }
    }

    pub fn with_onsite(mut self, site: usize, coupling: f64, poly: NumberPoly) -> Self {
        self.diagonal.push(DiagonalTerm {
            coupling,
            factors: vec![(site, poly)],
        });
        self
    }

    pub fn with_diagonal(mut self, term: DiagonalTerm) -> Self {
        self.diagonal.push(term);
        self
    }

    pub fn with_bond(mut self, i: usize, j: usize, coupling: f64) -> Self {
        self.bonds.push(Bond { i, j, coupling });
        self
    }

    /// One site, `g (b†)^q b^q`.
    pub fn normal_power(q: usize, g: f64) -> Self {
        Self::new(1).with_onsite(0, g, crate::ordering::normal_to_number(q))
    }

    pub fn validate(&self) -> Result<()> {
        for t in &self.diagonal {
            if let Some((s, _)) = t.factors.iter().find(|(s, _)| *s >= self.sites) {
                return Err(Error::Domain(format!("diagonal term on site {s} of {}", self.sites)));
            }
        }
        for b in &self.bonds {
            if b.i == b.j || b.i >= self.sites || b.j >= self.sites {
                return Err(Error::Domain(format!(
                    "bond ({}, {}) is not between two of {} sites",
                    b.i, b.j, self.sites
                )));
            }
        }
        Ok(())
    }

    pub fn diagonal_energy(&self, state: &[u32]) -> f64 {
        self.diagonal
            .iter()
            .map(|t| {
                t.factors.iter().fold(t.coupling, |acc, (site, p)| {
                    acc * rational_to_f64(&p.eval_int(i64::from(state[*site])))
                })
            })
            .sum()
    }
}

/// Dense real symmetric operator; remembers how it was built so that
/// [`partition_trace`] can estimate cutoff sensitivity.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    matrix: DMatrix<f64>,
    origin: Option<(HamiltonianSpec, FockSpace)>,
}

const HERMITICITY_TOL: f64 = 1e-12;

impl DenseOperator {
    pub fn from_matrix(matrix: DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(Error::Domain("operator must be a non-empty square matrix".into()));
        }
        let asym = (&matrix - matrix.transpose()).amax();
        if asym > HERMITICITY_TOL {
            return Err(Error::Domain(format!("operator not symmetric (max asymmetry {asym:e})")));
        }
        Ok(Self { matrix, origin: None })
    }

    /// Real Hermitian matrix from a complex one with vanishing imaginary part.
    pub fn from_complex(matrix: &DMatrix<Complex<f64>>) -> Result<Self> {
        if matrix.iter().any(|z| z.im.abs() > HERMITICITY_TOL) {
            return Err(Error::Domain("operator has an imaginary part".into()));
        }
        Self::from_matrix(matrix.map(|z| z.re))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            matrix: &self.matrix * c,
            origin: None,
        }
    }

    /// Full eigendecomposition, checked by the residual `‖AV − VΛ‖ ≤ 1e-10 ‖A‖`.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let eig = SymmetricEigen::new(self.matrix.clone());
        let values = &eig.eigenvalues;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Eigensolve("non-finite eigenvalue".into()));
        }
        let norm = self.matrix.norm().max(f64::MIN_POSITIVE);
        let residual = (&self.matrix * &eig.eigenvectors
            - &eig.eigenvectors * DMatrix::from_diagonal(values))
            .norm();
        if residual > 1e-10 * norm {
            return Err(Error::Eigensolve(format!("residual {residual:e} exceeds tolerance")));
        }
        let mut v: Vec<f64> = values.iter().copied().collect();
        v.sort_by(f64::total_cmp);
        Ok(v)
    }
}

/// Dense matrix of `spec` on `space`. Hopping moves one boson `j → i` with
/// element `√((n_i+1) n_j)`; states pushed outside a cutoff space are dropped.
pub fn build_hamiltonian(spec: &HamiltonianSpec, space: &FockSpace) -> Result<DenseOperator> {
    spec.validate()?;
    if spec.sites != space.sites() {
        return Err(Error::Domain(format!(
            "spec has {} sites, space has {}",
            spec.sites,
            space.sites()
        )));
    }
    let basis = space.basis();
    if basis.is_empty() {
        return Err(Error::Domain("Fock space holds no states".into()));
    }
    let index: HashMap<&[u32], usize> =
        basis.iter().enumerate().map(|(k, s)| (s.as_slice(), k)).collect();
    let dim = basis.len();
    let mut m = DMatrix::zeros(dim, dim);
    for (col, state) in basis.iter().enumerate() {
        m[(col, col)] += spec.diagonal_energy(state);
        for b in &spec.bonds {
            for (to, from) in [(b.i, b.j), (b.j, b.i)] {
                if state[from] == 0 {
                    continue;
                }
                let mut next = state.clone();
                next[from] -= 1;
                next[to] += 1;
                if let Some(&row) = index.get(next.as_slice()) {
                    let element = (f64::from(state[to] + 1) * f64::from(state[from])).sqrt();
                    m[(row, col)] += b.coupling * element;
                }
            }
        }
    }
    let mut op = DenseOperator::from_matrix(m)?;
    op.origin = Some((spec.clone(), space.clone()));
    Ok(op)
}

fn trace_exp(op: &DenseOperator, beta: f64) -> Result<f64> {
    let mut acc = LogSum::default();
    for lambda in op.eigenvalues()? {
        acc.add_ln(-beta * lambda);
    }
    Ok(acc.ln_total())
}

/// `Tr e^{-βA}` from the full spectrum. For operators built on a cutoff
/// space the result is recomputed at `n_cutoff − 2` and the difference is
/// reported as `truncation_bound`.
pub fn partition_trace(op: &DenseOperator, beta: f64) -> Result<PartitionResult> {
    let ln_z = trace_exp(op, beta)?;
    let mut result = PartitionResult::from_value("oracle-trace", ln_z.exp());
    result.log_value = ln_z;
    if let Some((spec, FockSpace::Cutoff { sites, n_cutoff })) = &op.origin {
        result.cutoff = u64::from(*n_cutoff);
        if *n_cutoff >= 2 {
            let reduced = FockSpace::Cutoff {
                sites: *sites,
                n_cutoff: n_cutoff - 2,
            };
            let ln_reduced = trace_exp(&build_hamiltonian(spec, &reduced)?, beta)?;
            result.truncation_bound = (ln_z.exp() - ln_reduced.exp()).abs();
        }
    }
    Ok(result)
}

/// `q + Σ_{n≥0} exp(-βg (n+q)!/n!)`, the partition function of `g (b†)^q b^q`.
pub fn partition_exact_q(q: usize, beta_g: f64, tail: &TailPolicy) -> Result<PartitionResult> {
    if !(beta_g > 0.0) {
        return Err(Error::Domain(format!("βg must be positive, got {beta_g}")));
    }
    let sum = sum_positive_series(tail, |n| {
        let e: f64 = (1..=q as u64).map(|j| (n + j) as f64).product();
        Ok(-beta_g * e)
    })?;
    let mut acc = LogSum::default();
    acc.add_ln(sum.ln_value);
    if q > 0 {
        acc.add_ln((q as f64).ln());
    }
    let ln_z = acc.ln_total();
    let mut result = PartitionResult::from_value("oracle", ln_z.exp());
    result.log_value = ln_z;
    result.cutoff = sum.cutoff;
    result.truncation_bound = sum.tail_bound;
    Ok(result)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Spin matrices in the `S_z` eigenbasis ordered `m = S, S−1, …, −S`.
pub fn spin_matrix(spin: HalfInt, axis: Axis, hbar: f64) -> DMatrix<Complex<f64>> {
    let dim = spin.twice() as usize + 1;
    let s = spin.value();
    let m_of = |k: usize| s - k as f64;
    // ⟨m+1|S_+|m⟩ = ħ √(S(S+1) − m(m+1))
    let raise = |k: usize| hbar * (s * (s + 1.0) - m_of(k) * (m_of(k) + 1.0)).sqrt();
    let mut out = DMatrix::from_element(dim, dim, Complex::new(0.0, 0.0));
    match axis {
        Axis::Z => {
            for k in 0..dim {
                out[(k, k)] = Complex::new(hbar * m_of(k), 0.0);
            }
        }
        Axis::X | Axis::Y => {
            for k in 1..dim {
                // S_+ maps column k (m) to row k-1 (m+1)
                let v = 0.5 * raise(k);
                let (up, down) = match axis {
                    Axis::X => (Complex::new(v, 0.0), Complex::new(v, 0.0)),
                    _ => (Complex::new(0.0, -v), Complex::new(0.0, v)),
                };
                out[(k - 1, k)] = up;
                out[(k, k - 1)] = down;
            }
        }
    }
    out
}
