use cspi_core::dual_eval::{
    convergence_scan, figure2_table, harmonic_dual_exponentiated, harmonic_partition,
    partition_dual_h, partition_dual_offdiag, wrong_action_partition, HarmonicAction, WrongAction,
};
use cspi_core::oracle::{
    partition_exact_q, partition_trace, spin_matrix, Axis, DenseOperator,
    FockSpace, HamiltonianSpec,
};
use cspi_core::ordering::{
    normal_to_antinormal, normal_to_number, number_to_antinormal, number_to_normal, NumberPoly,
};
use cspi_core::spin::{
    fz_matrix, spin_partition_x, spin_partition_z, naive_symbol_spin_z, SpinHamiltonian, SpinSpec,
};
use cspi_core::symbols::{h_symbol_q, laguerre_transform};
use cspi_core::worldline::dyson_partition;
use cspi_core::{DiscreteScheme, Error, PartitionResult, Slices, SymbolKind};
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::output::{float, fmt_f64, render_csv, render_json};
use crate::params::{Format, Method, Params, SpinAxis};
use crate::CliError;

const MAX_SYMBOL_Q: usize = 12;

fn slices_value(s: Slices) -> Value {
    match s {
        Slices::Finite(n) => json!(n),
        Slices::Continuum => json!("continuum"),
    }
}

fn result_json(r: &PartitionResult, params: Map<String, Value>) -> Value {
    let mut obj = Map::new();
    obj.insert("value".into(), float(r.value));
    obj.insert("log_value".into(), float(r.log_value));
    obj.insert("method".into(), json!(r.method));
    obj.insert("cutoff".into(), json!(r.cutoff));
    obj.insert("truncation_bound".into(), float(r.truncation_bound));
    if let Some(b) = r.rigorous_bound {
        obj.insert("rigorous_bound".into(), float(b));
    }
    if !r.orders.is_empty() {
        obj.insert("orders".into(), Value::Array(r.orders.iter().map(|&o| float(o)).collect()));
    }
    obj.insert("params".into(), Value::Object(params));
    Value::Object(obj)
}

fn result_csv(r: &PartitionResult) -> Vec<u8> {
    render_csv(
        &["method", "value", "log_value", "cutoff", "truncation_bound"],
        &[vec![
            r.method.clone(),
            fmt_f64(r.value),
            fmt_f64(r.log_value),
            r.cutoff.to_string(),
            fmt_f64(r.truncation_bound),
        ]],
    )
}

fn q_or(p: &Params, default: usize) -> Result<usize, CliError> {
    let q = p.q.unwrap_or(default);
    if q == 0 {
        return Err(CliError::Config("q must be at least 1".into()));
    }
    Ok(q)
}

fn dual_scheme(p: &Params, beta: f64, kind: SymbolKind) -> Result<DiscreteScheme, CliError> {
    DiscreteScheme::new(p.slices.unwrap_or(Slices::Continuum), beta, kind)
        .map_err(|e| CliError::Config(e.to_string()))
}

/// Two-site model `g Σ_i (b_i†)^q b_i^q + J (b_1† b_2 + b_2† b_1)`.
fn two_site_spec(q: usize, g: f64, j: f64) -> HamiltonianSpec {
    let onsite = normal_to_number(q);
    HamiltonianSpec::new(2)
        .with_onsite(0, g, onsite.clone())
        .with_onsite(1, g, onsite)
        .with_bond(0, 1, j)
}

pub fn partition(p: &Params) -> Result<Vec<u8>, CliError> {
    let method = p.method.unwrap_or(Method::DualH);
    let beta = p.beta()?;
    let tail = p.tail()?;
    let g = p.g();
    let mut params = Map::new();
    params.insert("beta".into(), float(beta));
    params.insert("eps_rel".into(), float(tail.eps_rel));
    params.insert("n_max".into(), json!(tail.n_max_hard));
    let result = match method {
        Method::DualH | Method::DualBigH | Method::WrongI | Method::WrongII | Method::WrongIII
        | Method::Oracle => {
            let q = q_or(p, 1)?;
            params.insert("q".into(), json!(q));
            params.insert("g".into(), float(g));
            match method {
                Method::DualH => {
                    let scheme = dual_scheme(p, beta, SymbolKind::HDiagonal)?;
                    params.insert("slices".into(), slices_value(scheme.slices()));
                    let symbol = laguerre_transform(&h_symbol_q(q))?;
                    partition_dual_h(&symbol, g, &scheme, &tail)?
                }
                Method::DualBigH => {
                    let scheme = dual_scheme(p, beta, SymbolKind::HOffDiagonal)?;
                    params.insert("slices".into(), slices_value(scheme.slices()));
                    partition_dual_offdiag(&[(q, g)], &scheme, &tail)?
                }
                Method::WrongI => wrong_action_partition(WrongAction::I, q, beta * g, &tail)?,
                Method::WrongII => wrong_action_partition(WrongAction::II, q, beta * g, &tail)?,
                Method::WrongIII => wrong_action_partition(WrongAction::III, q, beta * g, &tail)?,
                _ => partition_exact_q(q, beta * g, &tail)?,
            }
        }
        Method::Dyson => {
            let q = q_or(p, 1)?;
            let j = p.j.unwrap_or(1.0);
            let n_tot = p.n_tot.unwrap_or(1);
            let p_max = p.p_max()?;
            params.insert("q".into(), json!(q));
            params.insert("g".into(), float(g));
            params.insert("j".into(), float(j));
            params.insert("n_tot".into(), json!(n_tot));
            params.insert("p_max".into(), json!(p_max));
            let space = FockSpace::Sector { sites: 2, total: n_tot };
            dyson_partition(&two_site_spec(q, g, j), beta, p_max, &space)?
        }
        Method::SpinZ => {
            let spec = SpinSpec {
                spin: p.spin(),
                hbar: p.hbar(),
                hamiltonian: SpinHamiltonian::Fz(p.f()),
            };
            params.insert("spin".into(), json!(spec.spin.to_string()));
            params.insert("hbar".into(), float(spec.hbar));
            params.insert("f".into(), poly_json(&p.f()));
            spin_partition_z(&spec, beta)?
        }
        Method::SpinX => {
            let p_max = p.p_max()?;
            params.insert("spin".into(), json!(p.spin().to_string()));
            params.insert("hbar".into(), float(p.hbar()));
            params.insert("omega".into(), float(p.omega()));
            params.insert("p_max".into(), json!(p_max));
            spin_partition_x(p.spin(), p.omega(), p.hbar(), beta, p_max)?.result
        }
    };
    Ok(match p.format_or(Format::Json) {
        Format::Json => render_json(&result_json(&result, params)),
        Format::Csv => result_csv(&result),
    })
}

fn poly_json(f: &NumberPoly) -> Value {
    Value::Array(f.coeffs().iter().map(|c| json!(c.to_string())).collect())
}

pub fn figure2(p: &Params) -> Result<Vec<u8>, CliError> {
    let q = q_or(p, 4)?;
    let beta_g = p.beta()? * p.g();
    let n_max = p.n_max.unwrap_or(60);
    let table = figure2_table(q, beta_g, n_max);
    let header = ["n", "asinh_exact", "asinh_I", "asinh_II", "asinh_III"];
    let rows: Vec<Vec<f64>> = table
        .iter()
        .map(|r| vec![r.exact, r.action_i, r.action_ii, r.action_iii])
        .collect();
    Ok(match p.format_or(Format::Csv) {
        Format::Csv => render_csv(
            &header,
            &table
                .iter()
                .zip(&rows)
                .map(|(r, v)| {
                    std::iter::once(r.n.to_string())
                        .chain(v.iter().map(|&x| fmt_f64(x)))
                        .collect()
                })
                .collect::<Vec<_>>(),
        ),
        Format::Json => render_json(&json!({
            "columns": header,
            "params": {"q": q, "beta_g": float(beta_g), "n_max": n_max},
            "rows": table.iter().zip(&rows).map(|(r, v)| {
                let mut row = vec![json!(r.n)];
                row.extend(v.iter().map(|&x| float(x)));
                Value::Array(row)
            }).collect::<Vec<_>>(),
        })),
    })
}

pub fn converge(p: &Params) -> Result<Vec<u8>, CliError> {
    let q = q_or(p, 1)?;
    let beta = p.beta()?;
    let g = p.g();
    let tail = p.tail()?;
    let slices = p
        .slices_list
        .clone()
        .unwrap_or_else(|| (6..=12).map(|k| 1u64 << k).collect());
    if slices.is_empty() || slices.windows(2).any(|w| w[0] >= w[1]) || slices[0] == 0 {
        return Err(CliError::Config("slices_list must be positive and strictly increasing".into()));
    }
    let symbol = laguerre_transform(&h_symbol_q(q))?;
    let rows = convergence_scan(&symbol, g, beta, &slices, &tail).map_err(|e| {
        let offending = slices.iter().copied().find(|&n| {
            DiscreteScheme::new(Slices::Finite(n), beta, SymbolKind::HDiagonal)
                .and_then(|s| partition_dual_h(&symbol, g, &s, &tail))
                .is_err()
        });
        CliError::eval_with(e, offending.map(|n| ("slices", json!(n))))
    })?;

    let beta_g = beta * g;
    let mut records = Vec::with_capacity(rows.len());
    for row in &rows {
        let (inv_det, dual, action_i) = match row.slices {
            Slices::Finite(n) => {
                let delta_g = beta_g / n as f64;
                let inv_det = harmonic_partition(HarmonicAction::Correct, n, delta_g)
                    .map_err(|e| CliError::eval_with(e, Some(("slices", json!(n)))))?;
                let dual = harmonic_dual_exponentiated(n, delta_g, &tail)
                    .map_err(|e| CliError::eval_with(e, Some(("slices", json!(n)))))?;
                if (inv_det - dual).abs() > 1e-12 * inv_det {
                    return Err(CliError::eval_with(
                        Error::CrossCheck(format!("1/det {inv_det} and dual sum {dual} disagree")),
                        Some(("slices", json!(n))),
                    ));
                }
                let action_i = harmonic_partition(HarmonicAction::ActionI, n, delta_g)?;
                (inv_det, dual, action_i)
            }
            Slices::Continuum => {
                let limit = 1.0 / -(-beta_g).exp_m1();
                (limit, limit, 1.0 / beta_g.exp_m1())
            }
        };
        records.push((row, inv_det, dual, action_i));
    }

    let header = [
        "slices",
        "value",
        "abs_error",
        "ratio",
        "harmonic_inv_det",
        "harmonic_dual",
        "harmonic_action_i",
    ];
    Ok(match p.format_or(Format::Csv) {
        Format::Csv => render_csv(
            &header,
            &records
                .iter()
                .map(|(row, inv_det, dual, action_i)| {
                    vec![
                        row.slices.to_string(),
                        fmt_f64(row.value),
                        fmt_f64(row.abs_error),
                        row.ratio.map(fmt_f64).unwrap_or_default(),
                        fmt_f64(*inv_det),
                        fmt_f64(*dual),
                        fmt_f64(*action_i),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
        Format::Json => render_json(&json!({
            "params": {"q": q, "g": float(g), "beta": float(beta), "eps_rel": float(tail.eps_rel)},
            "rows": records.iter().map(|(row, inv_det, dual, action_i)| json!({
                "slices": slices_value(row.slices),
                "value": float(row.value),
                "abs_error": float(row.abs_error),
                "ratio": row.ratio.map_or(Value::Null, float),
                "harmonic_inv_det": float(*inv_det),
                "harmonic_dual": float(*dual),
                "harmonic_action_i": float(*action_i),
            })).collect::<Vec<_>>(),
        })),
    })
}

pub fn spin(p: &Params) -> Result<Vec<u8>, CliError> {
    if p.format == Some(Format::Csv) {
        return Err(CliError::Config("spin output is JSON only".into()));
    }
    let beta = p.beta()?;
    let (spin, hbar) = (p.spin(), p.hbar());
    let value = match p.axis.unwrap_or(SpinAxis::X) {
        SpinAxis::X => {
            let omega = p.omega();
            let p_max = p.p_max()?;
            let sx = DenseOperator::from_complex(&spin_matrix(spin, Axis::X, hbar))?;
            let exact = partition_trace(&sx.scaled(omega), beta)?;
            let series = spin_partition_x(spin, omega, hbar, beta, p_max)?;
            let bound = series.result.rigorous_bound.unwrap_or(0.0);
            let gap = (series.result.value - exact.value).abs();
            if gap > bound + 1e-12 * exact.value {
                return Err(Error::CrossCheck(format!(
                    "jump series misses the spin-matrix value by {gap:e}, beyond its bound {bound:e}"
                ))
                .into());
            }
            json!({
                "axis": "x",
                "exact": float(exact.value),
                "worldline": float(series.result.value),
                "worldline_orders": series.result.orders.iter().map(|&o| float(o)).collect::<Vec<_>>(),
                "order2": float(series.order2),
                "truncation_bound": float(series.result.truncation_bound),
                "rigorous_bound": float(bound),
                "params": {"spin": spin.to_string(), "hbar": float(hbar), "omega": float(omega),
                           "beta": float(beta), "p_max": p_max},
            })
        }
        SpinAxis::Z => {
            let f = p.f();
            let spec = SpinSpec {
                spin,
                hbar,
                hamiltonian: SpinHamiltonian::Fz(f.clone()),
            };
            let z = spin_partition_z(&spec, beta)?;
            let oracle = partition_trace(&fz_matrix(spin, &f, hbar)?, beta)?;
            let oracle_gap = z.relative_difference(&oracle);
            if oracle_gap > 1e-11 {
                return Err(Error::CrossCheck(format!(
                    "f(S_z) sum differs from the spin-matrix trace by {oracle_gap:e}"
                ))
                .into());
            }
            let naive = naive_symbol_spin_z(spin, &f, hbar, beta)?;
            json!({
                "axis": "z",
                "exact": float(z.value),
                "oracle": float(oracle.value),
                "oracle_check": "AGREE",
                "naive": float(naive.naive),
                "naive_relative_gap": float(naive.relative_gap),
                "comparator": if naive.agree { "AGREE" } else { "DIFFER" },
                "params": {"spin": spin.to_string(), "hbar": float(hbar), "beta": float(beta),
                           "f": poly_json(&f)},
            })
        }
    };
    Ok(render_json(&value))
}

fn rationals(v: &[BigRational]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

pub fn symbol(p: &Params) -> Result<Vec<u8>, CliError> {
    let q_max = p.q.unwrap_or(MAX_SYMBOL_Q);
    if q_max > MAX_SYMBOL_Q {
        return Err(CliError::Config(format!("symbol tables go up to q = {MAX_SYMBOL_Q}")));
    }
    let mut tables: Vec<(usize, &str, Vec<String>)> = Vec::new();
    for q in 0..=q_max {
        let power = NumberPoly::power(q);
        tables.push((q, "normal_power_in_n", rationals(normal_to_number(q).coeffs())));
        tables.push((q, "normal_power_antinormal", rationals(normal_to_antinormal(q).coeffs())));
        tables.push((q, "n_power_normal", rationals(number_to_normal(&power).coeffs())));
        tables.push((q, "n_power_antinormal", rationals(number_to_antinormal(&power).coeffs())));
    }
    Ok(match p.format_or(Format::Json) {
        Format::Json => {
            let mut by_q = Vec::new();
            for q in 0..=q_max {
                let mut obj = Map::new();
                obj.insert("q".into(), json!(q));
                for (_, name, coeffs) in tables.iter().filter(|t| t.0 == q) {
                    obj.insert((*name).into(), json!(coeffs));
                }
                by_q.push(Value::Object(obj));
            }
            render_json(&json!({"tables": by_q}))
        }
        Format::Csv => render_csv(
            &["q", "table", "r", "coefficient"],
            &tables
                .iter()
                .flat_map(|(q, name, coeffs)| {
                    coeffs.iter().enumerate().map(move |(r, c)| {
                        vec![q.to_string(), name.to_string(), r.to_string(), c.clone()]
                    })
                })
                .collect::<Vec<_>>(),
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use cspi_core::oracle::build_hamiltonian;

    #[test]
    fn two_site_spec_has_both_onsite_terms() {
        let spec = two_site_spec(2, 0.5, 1.0);
        assert_eq!(spec.diagonal_energy(&[2, 3]), 0.5 * (2.0 + 6.0));
        assert_eq!(spec.bonds.len(), 1);
    }

    #[test]
    fn build_is_consistent_with_spec() {
        let spec = two_site_spec(1, 0.0, 1.0);
        let op = build_hamiltonian(&spec, &FockSpace::Sector { sites: 2, total: 1 }).unwrap();
        assert_eq!(op.dim(), 2);
    }
}
