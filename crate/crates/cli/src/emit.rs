//! JSON and CSV renderings of a report.

use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::CliError;
use crate::report::AnalysisReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// `%.17g`-style rendering: 17 significant digits, trailing zeros
/// trimmed, at least one fractional digit in positional form.
pub fn format_g17(v: f64) -> String {
    if v == 0.0 {
        return if v.is_sign_negative() { "-0.0" } else { "0.0" }.into();
    }
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let mut s = format!("{:.*}", (16 - exp) as usize, v);
        if s.contains('.') {
            s.truncate(s.trim_end_matches('0').len());
            if s.ends_with('.') {
                s.push('0');
            }
        }
        s
    } else {
        let mut m = mantissa.trim_end_matches('0').to_string();
        if m.ends_with('.') {
            m.push('0');
        }
        format!("{m}e{exp}")
    }
}

/// Pretty JSON with floats written by [`format_g17`].
struct G17Formatter<'a>(PrettyFormatter<'a>);

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*)),* $(,)?) => {
        $(
            fn $name<W: ?Sized + io::Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> io::Result<()> {
                self.0.$name(w $(, $arg)*)
            }
        )*
    };
}

impl Formatter for G17Formatter<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(format_g17(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    delegate! {
        begin_array(),
        end_array(),
        begin_array_value(first: bool),
        end_array_value(),
        begin_object(),
        end_object(),
        begin_object_key(first: bool),
        end_object_key(),
        begin_object_value(),
        end_object_value(),
    }
}

/// Any serializable value as pretty JSON with 17-digit floats.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, G17Formatter(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("report types serialize");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

pub fn emit_report(report: &AnalysisReport, format: Format) -> Result<String, CliError> {
    if report.spectrum.as_ref().is_some_and(|s| s.eigenvalues.is_empty()) {
        return Err(CliError::EmptySpectrum);
    }
    match format {
        Format::Json => Ok(to_json(report)),
        Format::Csv => {
            let spectrum = report.spectrum.as_ref().ok_or(CliError::EmptySpectrum)?;
            let mut out = String::from("index,re,im,modulus,in_disk_union\n");
            for (i, e) in spectrum.eigenvalues.iter().enumerate() {
                out.push_str(&format!(
                    "{},{:?},{:?},{:?},{}\n",
                    i + 1,
                    e.re,
                    e.im,
                    e.modulus,
                    e.in_disk_union
                ));
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{AnalysisConfig, OperatorConfig};
    use crate::report::run_analyze;

    #[test]
    fn g17_examples() {
        assert_eq!(format_g17(1.0), "1.0");
        assert_eq!(format_g17(0.75), "0.75");
        assert_eq!(format_g17(0.1), "0.10000000000000001");
        assert_eq!(format_g17(-(2.0f64).powi(-70)), "-8.4703294725430034e-22");
        assert_eq!(format_g17(1e17), "1.0e17");
        assert_eq!(format_g17(123456.0), "123456.0");
        assert_eq!(format_g17(0.0), "0.0");
        assert_eq!(format_g17(1.0 / 3.0), "0.33333333333333331");
    }

    #[test]
    fn g17_round_trips() {
        for v in [
            0.1,
            1.0 / 3.0,
            2.0f64.sqrt(),
            1e-300,
            6.02214076e23,
            -7.25e-6,
            f64::MAX,
            f64::MIN_POSITIVE,
        ] {
            assert_eq!(format_g17(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn json_has_schema_paths() {
        let r = run_analyze(&AnalysisConfig::new(OperatorConfig::Kantorovich { n: 1 }));
        let v: serde_json::Value = serde_json::from_str(&emit_report(&r, Format::Json).unwrap()).unwrap();
        for path in [
            "/config",
            "/checks/partition_of_unity",
            "/checks/positivity",
            "/checks/constant_reproduction",
            "/checks/norm_estimate",
            "/checks/kernel_residual",
            "/matrix/entries",
            "/matrix/row_sum_max_dev",
            "/matrix/diag_min",
            "/spectrum/eigenvalues",
            "/spectrum/disks",
            "/spectrum/classification",
            "/spectrum/diagnostics",
            "/iterates/converged",
            "/iterates/rate",
            "/iterates/m_used",
            "/timings",
        ] {
            assert!(v.pointer(path).is_some(), "missing {path}");
        }
        assert_eq!(v.pointer("/spectrum/classification").unwrap(), "conforms");
        assert_eq!(v.pointer("/matrix/entries/0/0").unwrap().as_f64(), Some(0.75));
    }

    #[test]
    fn csv_row_for_kantorovich() {
        let r = run_analyze(&AnalysisConfig::new(OperatorConfig::Kantorovich { n: 1 }));
        let csv = emit_report(&r, Format::Csv).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("index,re,im,modulus,in_disk_union"));
        assert_eq!(lines.next(), Some("1,1.0,0.0,1.0,true"));
        assert_eq!(lines.next(), Some("2,0.5,0.0,0.5,true"));
    }

    #[test]
    fn empty_spectrum_is_rejected() {
        let mut r = run_analyze(&AnalysisConfig::new(OperatorConfig::Bernstein { n: 1 }));
        r.spectrum.as_mut().unwrap().eigenvalues.clear();
        assert!(matches!(
            emit_report(&r, Format::Json),
            Err(CliError::EmptySpectrum)
        ));
        assert!(matches!(
            emit_report(&r, Format::Csv),
            Err(CliError::EmptySpectrum)
        ));
    }
}
