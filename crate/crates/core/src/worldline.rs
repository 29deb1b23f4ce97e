//! Continuous-time jump expansion of `Tr e^{-βH}` for `H = D + V`, with `D`
//! diagonal in the occupation basis and `V` a sum of hopping bonds.
//!
//! Expanding in `V` gives a sum over closed sequences of single-boson jumps.
//! A path of `p` jumps through states with diagonal energies `E_0 … E_p`
//! contributes
//!
//! ```text
//! Π (−J_b) √((n_to + 1) n_from)  ×  T_p(E_0, …, E_p; β)
//! ```
//!
//! where `T_p` is the time-ordered integral over the simplex
//! `0 < τ_1 < … < τ_p < β`.

use std::collections::HashMap;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::dual_eval::PartitionResult;
use crate::error::{Error, Result};
use crate::numeric::NeumaierSum;
use crate::oracle::{FockSpace, HamiltonianSpec};
use crate::symbols::{gamma_factor, jump_element};

/// One boson moved along `bond = (i, j)`: `direction = 1` moves it `j → i`,
/// `direction = -1` moves it `i → j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Jump {
    pub bond: (usize, usize),
    pub direction: i8,
}

impl Jump {
    /// `(to, from)` sites.
    pub fn endpoints(&self) -> (usize, usize) {
        let (i, j) = self.bond;
        if self.direction >= 0 {
            (i, j)
        } else {
            (j, i)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorldlinePath {
    pub initial: Vec<u32>,
    pub events: Vec<Jump>,
}

impl WorldlinePath {
    pub fn new(initial: Vec<u32>, events: Vec<Jump>) -> Self {
        Self { initial, events }
    }

    /// Occupations before the first jump and after each one.
    pub fn states(&self) -> Result<Vec<Vec<u32>>> {
        let mut out = Vec::with_capacity(self.events.len() + 1);
        let mut state = self.initial.clone();
        out.push(state.clone());
        for (k, jump) in self.events.iter().enumerate() {
            let (to, from) = jump.endpoints();
            if to == from || to >= state.len() || from >= state.len() || jump.direction == 0 {
                return Err(Error::InvalidPath(format!("jump {k} has bond {:?}", jump.bond)));
            }
            if state[from] == 0 {
                return Err(Error::InvalidPath(format!(
                    "jump {k} empties site {from}, which holds no boson"
                )));
            }
            state[from] -= 1;
            state[to] += 1;
            out.push(state.clone());
        }
        Ok(out)
    }

    pub fn is_closed(&self) -> Result<bool> {
        let states = self.states()?;
        Ok(states.last() == states.first())
    }
}

/// `∫_{0<τ_1<…<τ_p<β} e^{-(β-τ_p)E_p} … e^{-τ_1 E_0} dτ`.
///
/// Equals the `(0, p)` entry of `exp(β(−diag(E) + U))`, with `U` the unit
/// superdiagonal. That matrix is triangular with non-negative off-diagonal
/// entries, so coincident or nearly coincident energies need no special care.
pub fn simplex_integral(energies: &[f64], beta: f64) -> f64 {
    match energies {
        [] => 0.0,
        [e0] => (-beta * e0).exp(),
        _ => {
            let lo = energies.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = energies.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let mid = 0.5 * (lo + hi);
            let dim = energies.len();
            let spread = beta * (0.5 * (hi - lo) + 1.0);
            let squarings = if spread > 0.5 {
                (spread / 0.5).log2().ceil() as i32
            } else {
                0
            };
            let scale = beta / 2f64.powi(squarings);
            let a = DMatrix::from_fn(dim, dim, |r, c| {
                if r == c {
                    -scale * (energies[r] - mid)
                } else if c == r + 1 {
                    scale
                } else {
                    0.0
                }
            });
            let mut term = DMatrix::identity(dim, dim);
            let mut exp = DMatrix::identity(dim, dim);
            for k in 1..=20 {
                term = &term * &a / k as f64;
                exp += &term;
            }
            for _ in 0..squarings {
                exp = &exp * &exp;
            }
            exp[(0, dim - 1)] * (-beta * mid).exp()
        }
    }
}

/// Visits every closed path of at most `p_max` jumps starting at `initial`,
/// pruning branches that cannot return in the jumps left.
fn for_each_closed_path<F>(spec: &HamiltonianSpec, initial: &[u32], p_max: usize, mut visit: F)
where
    F: FnMut(&[Vec<u32>], &[Jump]),
{
    let mut states = vec![initial.to_vec()];
    let mut events = Vec::new();
    descend(spec, initial, p_max, &mut states, &mut events, &mut visit);
}

fn descend<F>(
    spec: &HamiltonianSpec,
    initial: &[u32],
    p_max: usize,
    states: &mut Vec<Vec<u32>>,
    events: &mut Vec<Jump>,
    visit: &mut F,
) where
    F: FnMut(&[Vec<u32>], &[Jump]),
{
    let current = states.last().expect("path holds its initial state");
    if current.as_slice() == initial {
        visit(states, events);
    }
    let remaining = p_max - events.len();
    if remaining == 0 {
        return;
    }
    for b in &spec.bonds {
        for direction in [1i8, -1] {
            let jump = Jump {
                bond: (b.i, b.j),
                direction,
            };
            let (to, from) = jump.endpoints();
            let current = states.last().expect("path holds its initial state");
            if current[from] == 0 {
                continue;
            }
            let mut next = current.clone();
            next[from] -= 1;
            next[to] += 1;
            let distance: u32 = next.iter().zip(initial).map(|(a, b)| a.abs_diff(*b)).sum();
            if (distance / 2) as usize > remaining - 1 {
                continue;
            }
            states.push(next);
            events.push(jump);
            descend(spec, initial, p_max, states, events, visit);
            events.pop();
            states.pop();
        }
    }
}

/// All closed paths from `initial` with at most `p_max` jumps, in
/// depth-first order.
pub fn closed_paths(spec: &HamiltonianSpec, initial: &[u32], p_max: usize) -> Vec<WorldlinePath> {
    let mut out = Vec::new();
    for_each_closed_path(spec, initial, p_max, |_, events| {
        out.push(WorldlinePath::new(initial.to_vec(), events.to_vec()));
    });
    out
}

fn orders_from(spec: &HamiltonianSpec, initial: &[u32], beta: f64, p_max: usize) -> Vec<NeumaierSum> {
    let mut orders = vec![NeumaierSum::default(); p_max + 1];
    let mut memo: HashMap<Vec<u64>, f64> = HashMap::new();
    let mut level: HashMap<Vec<u32>, f64> = HashMap::new();
    let coupling: HashMap<(usize, usize), f64> =
        spec.bonds.iter().map(|b| ((b.i, b.j), b.coupling)).collect();
    for_each_closed_path(spec, initial, p_max, |states, events| {
        let mut energies: Vec<f64> = states
            .iter()
            .map(|s| {
                *level
                    .entry(s.clone())
                    .or_insert_with(|| spec.diagonal_energy(s))
            })
            .collect();
        // T_p is symmetric in its nodes; key on the sorted energies.
        energies.sort_by(f64::total_cmp);
        let key: Vec<u64> = energies.iter().map(|e| e.to_bits()).collect();
        let t = *memo
            .entry(key)
            .or_insert_with(|| simplex_integral(&energies, beta));
        let mut weight = t;
        for (state, jump) in states.iter().zip(events) {
            let (to, from) = jump.endpoints();
            weight *= -coupling[&jump.bond] * jump_element(state, to, from);
        }
        orders[events.len()].add(weight);
    });
    orders
}

/// `Tr e^{-βH}` on a number sector from all closed jump paths with at most
/// `p_max` jumps. `orders[p]` holds the order-`p` shell; `truncation_bound`
/// is the magnitude of the last shell and `rigorous_bound` the factorial
/// remainder bound `d e^{-βE_min} (βv)^{p+1}/(p+1)! e^{βv}` with `v` a
/// row-sum bound on `‖V‖`.
pub fn dyson_partition(
    spec: &HamiltonianSpec,
    beta: f64,
    p_max: usize,
    space: &FockSpace,
) -> Result<PartitionResult> {
    spec.validate()?;
    if p_max % 2 != 0 {
        return Err(Error::Domain(format!("expansion order must be even, got {p_max}")));
    }
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(Error::Domain(format!("β must be finite and non-negative, got {beta}")));
    }
    let FockSpace::Sector { sites, .. } = *space else {
        return Err(Error::Domain("jump expansion needs a fixed-number sector".into()));
    };
    if sites != spec.sites {
        return Err(Error::Domain(format!("spec has {} sites, sector has {sites}", spec.sites)));
    }
    let basis = space.basis();
    if basis.is_empty() {
        return Err(Error::Domain("sector holds no states".into()));
    }

    let per_state: Vec<Vec<NeumaierSum>> = basis
        .par_iter()
        .map(|s| orders_from(spec, s, beta, p_max))
        .collect();
    let mut totals = vec![NeumaierSum::default(); p_max + 1];
    for shells in &per_state {
        for (acc, shell) in totals.iter_mut().zip(shells) {
            acc.add(shell.total());
        }
    }
    let orders: Vec<f64> = totals.iter().map(NeumaierSum::total).collect();
    let value: f64 = orders.iter().copied().collect::<NeumaierSum>().total();

    let e_min = basis
        .iter()
        .map(|s| spec.diagonal_energy(s))
        .fold(f64::INFINITY, f64::min);
    let max_element = basis
        .iter()
        .flat_map(|s| {
            spec.bonds.iter().flat_map(move |b| {
                [jump_element(s, b.i, b.j), jump_element(s, b.j, b.i)]
            })
        })
        .fold(0.0, f64::max);
    let v: f64 = spec.bonds.iter().map(|b| 2.0 * b.coupling.abs() * max_element).sum();
    let k = (p_max + 1) as f64;
    let ln_fact: f64 = (1..=p_max + 1).map(|j| (j as f64).ln()).sum();
    let rigorous = if v == 0.0 || beta == 0.0 {
        0.0
    } else {
        ((basis.len() as f64).ln() - beta * e_min + k * (beta * v).ln() - ln_fact + beta * v).exp()
    };

    let mut result = PartitionResult::from_value("dyson", value);
    result.cutoff = p_max as u64;
    result.truncation_bound = orders.last().copied().unwrap_or(0.0).abs();
    result.rigorous_bound = Some(rigorous);
    result.orders = orders;
    Ok(result)
}

/// Product over jumps of `γ(n_to, n_to+1) γ(n_from, n_from−1)`, checked
/// against `Π √((n_to+1) n_from)` to 1e-10 relative.
pub fn gamma_weight_check(path: &WorldlinePath) -> Result<f64> {
    let states = path.states()?;
    let mut gamma = 1.0;
    let mut direct = 1.0;
    for (state, jump) in states.iter().zip(&path.events) {
        let (to, from) = jump.endpoints();
        let n_to = f64::from(state[to]);
        let n_from = f64::from(state[from]);
        gamma *= gamma_factor(n_to, n_to + 1.0)? * gamma_factor(n_from, n_from - 1.0)?;
        direct *= jump_element(state, to, from);
    }
    if (gamma - direct).abs() > 1e-10 * direct.abs().max(1.0) {
        return Err(Error::CrossCheck(format!(
            "γ product {gamma} differs from matrix elements {direct}"
        )));
    }
    Ok(gamma)
}

/// Smooth-path weight `Π √(ρ_to ρ_from)` with the occupations evaluated at
/// the jump instant, `ρ = n + Θ(0)` on the receiving site and `n − Θ(0)` on
/// the donating one.
pub fn naive_sqrt_weight(path: &WorldlinePath, theta0: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&theta0) {
        return Err(Error::Domain(format!("Θ(0) must lie in [0, 1], got {theta0}")));
    }
    let states = path.states()?;
    Ok(states
        .iter()
        .zip(&path.events)
        .map(|(state, jump)| {
            let (to, from) = jump.endpoints();
            ((f64::from(state[to]) + theta0) * (f64::from(state[from]) - theta0)).sqrt()
        })
        .product())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{build_hamiltonian, partition_trace};
    use crate::ordering::NumberPoly;

    fn hop(j: f64) -> HamiltonianSpec {
        HamiltonianSpec::new(2).with_bond(0, 1, j)
    }

    #[test]
    fn simplex_examples() {
        assert!((simplex_integral(&[0.7], 2.0) - (-1.4f64).exp()).abs() < 1e-16);
        let (a, b, beta): (f64, f64, f64) = (0.3, 1.9, 1.7);
        let expected = ((-beta * a).exp() - (-beta * b).exp()) / (b - a);
        assert!((simplex_integral(&[a, b], beta) - expected).abs() < 1e-15);
        assert!((simplex_integral(&[0.0; 3], 1.3) - 1.3 * 1.3 / 2.0).abs() < 1e-15);
        // all nodes equal: e^{-βa} β³/3!
        let t = simplex_integral(&[2.0, 2.0, 2.0, 2.0], 0.9);
        assert!((t / ((-1.8f64).exp() * 0.9f64.powi(3) / 6.0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn simplex_near_coincident_nodes() {
        let base = [0.4, 0.4, 1.1, 1.1, 1.1];
        let perturbed = [0.4, 0.4 + 1e-9, 1.1, 1.1 - 1e-9, 1.1 + 2e-9];
        for beta in [0.5, 3.0, 20.0] {
            let a = simplex_integral(&base, beta);
            let b = simplex_integral(&perturbed, beta);
            assert!((a - b).abs() <= 1e-6 * a, "β = {beta}");
        }
    }

    #[test]
    fn simplex_matches_distinct_node_divided_difference() {
        let nodes = [0.0, 0.5, 1.25, 3.0];
        let beta = 1.1;
        let f = |x: f64| (-beta * x).exp();
        let mut dd: Vec<f64> = nodes.iter().map(|&x| f(x)).collect();
        for level in 1..nodes.len() {
            for k in (level..nodes.len()).rev() {
                dd[k] = (dd[k] - dd[k - 1]) / (nodes[k] - nodes[k - level]);
            }
        }
        // T_p = (−1)^p × divided difference of e^{-βx}
        let expected = -dd[3];
        assert!((simplex_integral(&nodes, beta) - expected).abs() < 1e-14);
    }

    #[test]
    fn zero_hopping_gives_boltzmann_sum() {
        let spec = HamiltonianSpec::new(2)
            .with_bond(0, 1, 0.0)
            .with_onsite(0, 0.8, NumberPoly::power(1))
            .with_onsite(1, 0.3, NumberPoly::power(2));
        let space = FockSpace::Sector { sites: 2, total: 3 };
        let z = dyson_partition(&spec, 1.2, 6, &space).unwrap();
        let expected: f64 = space
            .basis()
            .iter()
            .map(|s| (-1.2 * spec.diagonal_energy(s)).exp())
            .sum();
        assert!((z.value - expected).abs() < 1e-14);
    }

    #[test]
    fn single_bond_reproduces_cosh() {
        let z = dyson_partition(&hop(1.0), 1.0, 12, &FockSpace::Sector { sites: 2, total: 1 }).unwrap();
        assert!((z.value - 2.0 * 1f64.cosh()).abs() < 1e-10);
        for (p, shell) in z.orders.iter().enumerate() {
            if p % 2 == 1 {
                assert_eq!(*shell, 0.0);
            }
        }
        assert!(z.rigorous_bound.unwrap() >= (z.value - 2.0 * 1f64.cosh()).abs());
    }

    #[test]
    fn matches_dense_trace_with_diagonal_terms() {
        let spec = hop(0.3)
            .with_onsite(0, 0.5, NumberPoly::from_integers(&[0, -1, 1]))
            .with_onsite(1, 0.2, NumberPoly::power(1));
        let space = FockSpace::Sector { sites: 2, total: 3 };
        let dyson = dyson_partition(&spec, 1.0, 16, &space).unwrap();
        let trace = partition_trace(&build_hamiltonian(&spec, &space).unwrap(), 1.0).unwrap();
        assert!(dyson.relative_difference(&trace) < 1e-10);
    }

    #[test]
    fn remainder_scales_with_coupling() {
        let space = FockSpace::Sector { sites: 2, total: 2 };
        let err = |j: f64| {
            let spec = hop(j);
            let exact = partition_trace(&build_hamiltonian(&spec, &space).unwrap(), 1.0).unwrap();
            let z = dyson_partition(&spec, 1.0, 6, &space).unwrap();
            (z.value - exact.value).abs()
        };
        // next omitted shell is order 8
        let ratio = err(0.5) / err(0.25);
        assert!((ratio / 256.0 - 1.0).abs() < 0.1, "ratio {ratio}");
    }

    #[test]
    fn paths_stay_positive_and_conserve_number() {
        let spec = hop(1.0);
        for initial in [[2u32, 0], [1, 1], [0, 2]] {
            for path in closed_paths(&spec, &initial, 6) {
                let states = path.states().unwrap();
                assert!(path.is_closed().unwrap());
                assert!(states.iter().all(|s| s.iter().sum::<u32>() == 2));
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let spec = hop(1.0);
        let sector = FockSpace::Sector { sites: 2, total: 1 };
        assert!(dyson_partition(&spec, 1.0, 3, &sector).is_err());
        let cutoff = FockSpace::Cutoff { sites: 2, n_cutoff: 2 };
        assert!(dyson_partition(&spec, 1.0, 2, &cutoff).is_err());
        let empty = FockSpace::Sector { sites: 0, total: 1 };
        let err = dyson_partition(&HamiltonianSpec::new(0), 1.0, 2, &empty);
        assert!(matches!(err, Err(Error::Domain(_))));
    }

    #[test]
    fn gamma_weights() {
        let one = WorldlinePath::new(vec![1, 0], vec![Jump { bond: (1, 0), direction: 1 }]);
        assert!((gamma_weight_check(&one).unwrap() - 1.0).abs() < 1e-14);
        let two = WorldlinePath::new(vec![2, 1], vec![Jump { bond: (1, 0), direction: 1 }]);
        assert!((gamma_weight_check(&two).unwrap() - 2.0).abs() < 1e-13);
        let empty = WorldlinePath::new(vec![3, 1], vec![]);
        assert_eq!(gamma_weight_check(&empty).unwrap(), 1.0);
        let bad = WorldlinePath::new(vec![0, 1], vec![Jump { bond: (1, 0), direction: 1 }]);
        assert!(matches!(gamma_weight_check(&bad), Err(Error::InvalidPath(_))));
    }

    #[test]
    fn naive_weight_cannot_match() {
        let path = WorldlinePath::new(vec![1, 0], vec![Jump { bond: (1, 0), direction: 1 }]);
        assert_eq!(naive_sqrt_weight(&path, 0.0).unwrap(), 0.0);
        assert_eq!(naive_sqrt_weight(&path, 1.0).unwrap(), 0.0);
        assert_eq!(naive_sqrt_weight(&path, 0.5).unwrap(), 0.5);
        assert!(naive_sqrt_weight(&path, 1.5).is_err());
    }
}
