use rayon::prelude::*;

use qlmc::{derive_params, lmc_complexity, Error, MeasureTriple, MorseState, QParam, QhoState, Tolerances};

use crate::csvfmt::{fmt_fixed5, fmt_num, CsvOut};
use crate::spec::{Output, SweepSpec, System};
use crate::CliError;

/// Published `(n, q, S, D, C)` for the q-oscillator.
pub const TABLE1_REFERENCE: [(u32, f64, f64, f64, f64); 9] = [
    (0, 0.001, 1.07236, 0.39894, 1.16582),
    (0, 0.4, 1.07236, 0.39894, 1.16582),
    (0, 1.0, 1.07236, 0.39894, 1.16582),
    (5, 0.001, 1.07829, 0.39232, 1.15329),
    (5, 0.4, 1.59322, 0.21132, 1.03962),
    (5, 1.0, 1.76806, 0.19666, 1.15235),
    (10, 0.001, 1.07829, 0.39232, 1.15329),
    (10, 0.4, 1.61096, 0.20561, 1.02962),
    (10, 1.0, 2.01018, 0.15668, 1.16957),
];

/// Absolute tolerance for `--strict` table comparisons.
pub const TABLE1_TOLERANCE: f64 = 5e-4;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Settings {
    pub tol: Tolerances,
    pub strict: bool,
}

/// A constructed eigenstate of either system.
pub enum State {
    Qho(QhoState),
    Morse(MorseState),
}

impl State {
    /// `Ok(None)` when the Morse state does not exist at this `q`.
    pub fn build(system: &System, n: u32, q: f64, tol: &Tolerances) -> Result<Option<Self>, CliError> {
        let qp = QParam::new(q).map_err(|e| CliError::Spec(e.to_string()))?;
        let numerical = |source| CliError::Numerical { n, q, source };
        match system {
            System::Qho => Ok(Some(State::Qho(
                QhoState::with_omega(n, qp, 1.0, &tol.density).map_err(numerical)?,
            ))),
            System::Morse(mol) => {
                let params = match derive_params(mol, qp) {
                    Ok(p) => p,
                    Err(Error::NoBoundStates { .. }) => {
                        log::info!("skipping {} n = {n}, q = {q}: no bound states", mol.name);
                        return Ok(None);
                    }
                    Err(e) => return Err(numerical(e)),
                };
                if n > params.n_max {
                    log::info!("skipping {} n = {n}, q = {q}: above n_max = {}", mol.name, params.n_max);
                    return Ok(None);
                }
                Ok(Some(State::Morse(
                    MorseState::with_integrator(params, n, &tol.density).map_err(numerical)?,
                )))
            }
        }
    }

    pub fn measures(&self, tol: &Tolerances) -> qlmc::Result<MeasureTriple> {
        match self {
            State::Qho(s) => lmc_complexity(s, tol),
            State::Morse(s) => lmc_complexity(s, tol),
        }
    }

    pub fn energy(&self) -> f64 {
        match self {
            State::Qho(s) => s.energy(),
            State::Morse(s) => s.energy(),
        }
    }

    pub fn density(&self, x: f64) -> f64 {
        match self {
            State::Qho(s) => s.density(x),
            State::Morse(s) => s.density(x),
        }
    }

    pub fn plot_window(&self) -> qlmc::Interval {
        match self {
            State::Qho(s) => s.plot_window(),
            State::Morse(s) => s.plot_window(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table1Row {
    pub n: u32,
    pub q: f64,
    pub measures: MeasureTriple,
}

pub fn table1_rows(tol: &Tolerances) -> Result<Vec<Table1Row>, CliError> {
    TABLE1_REFERENCE
        .par_iter()
        .map(|&(n, q, ..)| {
            let state = State::build(&System::Qho, n, q, tol)?.expect("oscillator states always exist");
            let measures = state
                .measures(tol)
                .map_err(|source| CliError::Numerical { n, q, source })?;
            Ok(Table1Row { n, q, measures })
        })
        .collect()
}

/// Cells deviating from the published table by more than
/// [`TABLE1_TOLERANCE`], as human-readable descriptions.
pub fn table1_deviations(rows: &[Table1Row]) -> Vec<String> {
    let mut out = Vec::new();
    for (row, &(_, _, s, d, c)) in rows.iter().zip(TABLE1_REFERENCE.iter()) {
        for (label, got, want) in [
            ("S", row.measures.s, s),
            ("D", row.measures.d, d),
            ("C", row.measures.c, c),
        ] {
            if (got - want).abs() > TABLE1_TOLERANCE {
                out.push(format!(
                    "n = {}, q = {}: {label} = {got:.5}, expected {want:.5}",
                    row.n, row.q
                ));
            }
        }
    }
    out
}

/// Table CSV (`n,q,S,D,C`, five decimals) and any strict-mode deviations.
pub fn cmd_table1(settings: &Settings) -> Result<(String, Vec<String>), CliError> {
    let rows = table1_rows(&settings.tol)?;
    let mut out = CsvOut::new();
    out.record(["n", "q", "S", "D", "C"])?;
    for r in &rows {
        out.record([
            r.n.to_string(),
            fmt_num(r.q),
            fmt_fixed5(r.measures.s),
            fmt_fixed5(r.measures.d),
            fmt_fixed5(r.measures.c),
        ])?;
    }
    let deviations = if settings.strict {
        table1_deviations(&rows)
    } else {
        Vec::new()
    };
    Ok((out.finish()?, deviations))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub n: u32,
    pub q: f64,
    pub measures: Option<MeasureTriple>,
    pub energy: f64,
    /// (closed form, numeric)
    pub uncertainty: Option<(f64, f64)>,
}

/// Evaluate every grid point, n-major and q-minor. Morse points above
/// `n_max` are dropped.
pub fn sweep_rows(spec: &SweepSpec, tol: &Tolerances) -> Result<Vec<SweepRow>, CliError> {
    let grid: Vec<(u32, f64)> = spec
        .n_list
        .iter()
        .flat_map(|&n| spec.q_list.iter().map(move |&q| (n, q)))
        .collect();
    let rows: Vec<Option<SweepRow>> = grid
        .par_iter()
        .map(|&(n, q)| {
            let Some(state) = State::build(&spec.system, n, q, tol)? else {
                return Ok(None);
            };
            let numerical = |source| CliError::Numerical { n, q, source };
            let measures = if spec.wants(Output::Measures) {
                Some(state.measures(tol).map_err(numerical)?)
            } else {
                None
            };
            let uncertainty = match (&state, spec.wants(Output::Uncertainty)) {
                (State::Qho(s), true) => Some((
                    s.uncertainty_product(),
                    s.uncertainty_numeric(&tol.density).map_err(numerical)?,
                )),
                _ => None,
            };
            Ok(Some(SweepRow {
                n,
                q,
                measures,
                energy: state.energy(),
                uncertainty,
            }))
        })
        .collect::<Result<_, CliError>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// Measures CSV `system,molecule,n,q,S,D,C,E`. Without `measures` the
/// S, D, C columns are omitted; `uncertainty` appends
/// `dxdp_closed,dxdp_numeric`.
pub fn cmd_sweep(spec: &SweepSpec, settings: &Settings) -> Result<String, CliError> {
    let rows = sweep_rows(spec, &settings.tol)?;
    let with_measures = spec.wants(Output::Measures);
    let with_unc = spec.wants(Output::Uncertainty);

    let mut header = vec!["system", "molecule", "n", "q"];
    if with_measures {
        header.extend(["S", "D", "C"]);
    }
    header.push("E");
    if with_unc {
        header.extend(["dxdp_closed", "dxdp_numeric"]);
    }

    let mut out = CsvOut::new();
    out.record(&header)?;
    for r in rows {
        let mut rec = vec![
            spec.system.label().to_string(),
            spec.system.molecule_name().to_string(),
            r.n.to_string(),
            fmt_num(r.q),
        ];
        if let Some(m) = r.measures {
            rec.extend([fmt_num(m.s), fmt_num(m.d), fmt_num(m.c)]);
        }
        rec.push(fmt_num(r.energy));
        if let Some((closed, numeric)) = r.uncertainty {
            rec.extend([fmt_num(closed), fmt_num(numeric)]);
        }
        out.record(&rec)?;
    }
    out.finish()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensitySlice {
    pub n: u32,
    pub q: f64,
    pub x: Vec<f64>,
    pub rho: Vec<f64>,
}

pub fn density_slices(spec: &SweepSpec, tol: &Tolerances) -> Result<Vec<DensitySlice>, CliError> {
    let grid: Vec<(u32, f64)> = spec
        .n_list
        .iter()
        .flat_map(|&n| spec.q_list.iter().map(move |&q| (n, q)))
        .collect();
    let slices: Vec<Option<DensitySlice>> = grid
        .par_iter()
        .map(|&(n, q)| {
            let Some(state) = State::build(&spec.system, n, q, tol)? else {
                return Ok(None);
            };
            let w = state.plot_window();
            let k = spec.points;
            let x: Vec<f64> = (0..k).map(|i| w.lo + w.width() * i as f64 / (k - 1) as f64).collect();
            let rho = x.iter().map(|&x| state.density(x)).collect();
            Ok(Some(DensitySlice { n, q, x, rho }))
        })
        .collect::<Result<_, CliError>>()?;
    Ok(slices.into_iter().flatten().collect())
}

/// Long-format density CSV `system,molecule,n,q,x,rho` over each state's
/// padded support window.
pub fn cmd_density(spec: &SweepSpec, settings: &Settings) -> Result<String, CliError> {
    let slices = density_slices(spec, &settings.tol)?;
    let mut out = CsvOut::new();
    out.record(["system", "molecule", "n", "q", "x", "rho"])?;
    let label = spec.system.label();
    let molecule = spec.system.molecule_name();
    for s in slices {
        let n = s.n.to_string();
        let q = fmt_num(s.q);
        for (x, rho) in s.x.iter().zip(&s.rho) {
            out.record([label, molecule, &n, &q, &fmt_num(*x), &fmt_num(*rho)])?;
        }
    }
    out.finish()
}

/// `name,a,r_e,D_e,mu` for each known molecule.
pub fn cmd_molecules_list(molecules: &[qlmc::Molecule]) -> Result<String, CliError> {
    let mut out = CsvOut::new();
    out.record(["name", "a", "r_e", "D_e", "mu"])?;
    for m in molecules {
        out.record([
            m.name.clone(),
            fmt_num(m.a),
            fmt_num(m.r_e),
            fmt_num(m.d_e),
            fmt_num(m.mu),
        ])?;
    }
    out.finish()
}
