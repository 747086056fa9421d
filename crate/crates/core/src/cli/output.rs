use std::io::{self, Write};

use crate::machines::MachineReport;

/// Fixed column order of the two-subsystem CSV.
pub const COLUMNS: [&str; 19] = [
    "t",
    "E_A",
    "E_B",
    "E_int",
    "S_A",
    "S_B",
    "beta_A",
    "beta_B",
    "Q_A",
    "Q_B",
    "W_A",
    "W_B",
    "I_AB",
    "sigma_A",
    "sigma_B",
    "clausius_sum",
    "fom",
    "carnot",
    "refined_carnot",
];

/// Twelve significant digits; `nan`, `inf`, `-inf` spelled out; `-0` printed as `0`.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else if x == 0.0 {
        format!("{:.11e}", 0.0)
    } else {
        format!("{x:.11e}")
    }
}

fn opt(x: Option<f64>) -> f64 {
    x.unwrap_or(f64::NAN)
}

/// Writes the ledger of a two-subsystem report; `with_w_c` appends the clock-work column.
pub fn write_report_csv<W: Write>(report: &MachineReport, with_w_c: bool, out: &mut W) -> io::Result<()> {
    if report.rows.first().map_or(0, |r| r.subsystems.len()) != 2 {
        return Err(io::Error::new(io::ErrorKind::InvalidInput, "CSV schema covers two-subsystem reports"));
    }
    let mut header = COLUMNS.join(",");
    if with_w_c {
        header.push_str(",W_C");
    }
    writeln!(out, "{header}")?;
    let w_c = report.w_c();
    for (k, r) in report.rows.iter().enumerate() {
        let (a, b) = (&r.subsystems[0], &r.subsystems[1]);
        let mut fields = vec![
            r.t,
            a.energy,
            b.energy,
            r.e_int,
            a.entropy,
            b.entropy,
            a.beta.value(),
            b.beta.value(),
            a.heat,
            b.heat,
            a.work,
            b.work,
            r.i_tot,
            a.sigma,
            b.sigma,
            r.clausius_sum,
            opt(report.fom[k]),
            opt(report.carnot),
            opt(report.refined[k]),
        ];
        if with_w_c {
            fields.push(opt(w_c.map(|w| w[k])));
        }
        let line: Vec<String> = fields.into_iter().map(format_number).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}

/// Two-column series `t,<name>`.
pub fn write_series_csv<W: Write>(name: &str, t: &[f64], values: &[f64], out: &mut W) -> io::Result<()> {
    writeln!(out, "t,{name}")?;
    for (t, v) in t.iter().zip(values) {
        writeln!(out, "{},{}", format_number(*t), format_number(*v))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(format_number(f64::NAN), "nan");
        assert_eq!(format_number(f64::INFINITY), "inf");
        assert_eq!(format_number(-0.0), format_number(0.0));
        assert_eq!(format_number(1.0 / 3.0), "3.33333333333e-1");
        assert_eq!(format_number(-1234.5), "-1.23450000000e3");
    }
}
