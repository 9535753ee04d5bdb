//! CSV serialization of sweep records and companion plot scripts.

use std::io::{Read, Write};
use std::path::Path;

use gse_core::emission::{BranchObservables, SweepRecord};
use gse_core::{GseError, Model};

pub const SWEEP_HEADER: [&str; 15] = [
    "model", "detuning", "g", "N", "rate_p", "rate_m", "rate_sum", "flux_p", "flux_m", "flux_sum", "weight_p",
    "weight_m", "tot_p", "tot_m", "tot_sum",
];

/// 17 significant digits, enough to round-trip any f64.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn sweep_row(r: &SweepRecord) -> Vec<String> {
    let mut row = vec![r.model.name().to_string(), fmt_float(r.detuning), fmt_float(r.g), r.n_electrons.to_string()];
    row.extend(
        [
            r.plus.rate_em,
            r.minus.rate_em,
            r.gse_rate(),
            r.plus.flux,
            r.minus.flux,
            r.gse_flux(),
            r.plus.photon_weight,
            r.minus.photon_weight,
            r.plus.rate_tot,
            r.minus.rate_tot,
            r.tot_rate(),
        ]
        .map(fmt_float),
    );
    row
}

pub fn write_sweep_csv<W: Write>(out: W, records: &[SweepRecord]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for r in records {
        w.write_record(sweep_row(r))?;
    }
    w.flush()?;
    Ok(())
}

pub fn sweep_csv_string(records: &[SweepRecord]) -> String {
    let mut buf = Vec::new();
    write_sweep_csv(&mut buf, records).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("csv output is ascii")
}

/// Parses a sweep CSV back into records; the header must match exactly.
pub fn read_sweep_csv<R: Read>(input: R) -> Result<Vec<SweepRecord>, GseError> {
    let mut rd = csv::Reader::from_reader(input);
    let header = rd.headers().map_err(csv_err)?.clone();
    if header.iter().ne(SWEEP_HEADER) {
        return Err(GseError::Config(format!("unexpected header {header:?}")));
    }
    let mut records = Vec::new();
    for row in rd.records() {
        let row = row.map_err(csv_err)?;
        let f = |i: usize| {
            row[i]
                .parse::<f64>()
                .map_err(|_| GseError::Config(format!("bad float '{}' in {}", &row[i], SWEEP_HEADER[i])))
        };
        let branch = |rate: usize, flux: usize, weight: usize, tot: usize| -> Result<BranchObservables, GseError> {
            Ok(BranchObservables { rate_em: f(rate)?, flux: f(flux)?, photon_weight: f(weight)?, rate_tot: f(tot)? })
        };
        records.push(SweepRecord {
            model: row[0].parse::<Model>()?,
            detuning: f(1)?,
            g: f(2)?,
            n_electrons: row[3].parse().map_err(|_| GseError::Config(format!("bad N '{}'", &row[3])))?,
            plus: branch(4, 7, 10, 12)?,
            minus: branch(5, 8, 11, 13)?,
        });
    }
    Ok(records)
}

fn csv_err(e: csv::Error) -> GseError {
    GseError::Config(format!("csv: {e}"))
}

/// Gnuplot script plotting rate and flux columns of `csv` against detuning.
pub fn gnuplot_script(csv: &Path, models: &[Model]) -> String {
    let file = csv.display().to_string();
    let file = file.as_str();
    let mut s = String::new();
    s.push_str("set datafile separator ','\nset key autotitle columnhead\n");
    s.push_str("set xlabel '(omega_c - omega_0)/omega_0'\nset logscale y\nset multiplot layout 1,2\n");
    for (title, cols) in [("rates / Gamma_el", [5, 6]), ("fluxes / (omega_0 Gamma_el)", [8, 9])] {
        s.push_str(&format!("set ylabel '{title}'\nplot "));
        let curves: Vec<String> = models
            .iter()
            .flat_map(|m| {
                cols.iter().map(move |c| {
                    format!(
                        "'{file}' using 2:(strcol(1) eq '{name}' ? ${c} : NaN) with lines title '{name} '.columnhead({c})",
                        name = m.name()
                    )
                })
            })
            .collect();
        s.push_str(&curves.join(", \\\n     "));
        s.push('\n');
    }
    s.push_str("unset multiplot\n");
    s
}
