//! Static eigenvalue plot: unit circle, Gershgorin disks, eigenvalue
//! markers, on a fixed 800x800 view of [-1.2, 1.2]^2.

use std::fmt::Write;

use pouspec::{Complex64, GershgorinDisk};

use crate::report::AnalysisReport;

pub const SIZE: f64 = 800.0;
pub const EXTENT: f64 = 1.2;

const SCALE: f64 = SIZE / (2.0 * EXTENT);
/// Pixel radius used to mark a disk of radius zero.
const POINT_DISK_RADIUS: f64 = 4.0;
const MARKER_HALF: f64 = 6.0;

pub fn to_px(z: Complex64) -> (f64, f64) {
    ((z.re + EXTENT) * SCALE, (EXTENT - z.im) * SCALE)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Plot of the given eigenvalues and disks under `title`.
pub fn spectrum_svg(title: &str, eigenvalues: &[Complex64], disks: &[GershgorinDisk]) -> String {
    let mut s = String::new();
    let (ox, oy) = to_px(Complex64::new(0.0, 0.0));
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, "  <title>{}</title>", escape(title));
    let _ = writeln!(s, r##"  <rect width="{SIZE}" height="{SIZE}" fill="#ffffff"/>"##);
    let _ = writeln!(
        s,
        r##"  <g class="axes" stroke="#bbbbbb" stroke-width="1"><line x1="0" y1="{oy:.3}" x2="{SIZE}" y2="{oy:.3}"/><line x1="{ox:.3}" y1="0" x2="{ox:.3}" y2="{SIZE}"/></g>"##
    );
    let _ = writeln!(
        s,
        r##"  <circle class="unit-circle" cx="{ox:.3}" cy="{oy:.3}" r="{SCALE:.3}" fill="none" stroke="#333333" stroke-width="1.5" stroke-dasharray="6 4"/>"##
    );

    let _ = writeln!(s, r#"  <g class="disks">"#);
    for d in disks {
        let (cx, cy) = to_px(Complex64::new(d.center, 0.0));
        if d.radius > 0.0 {
            let _ = writeln!(
                s,
                r##"    <circle class="disk" cx="{cx:.3}" cy="{cy:.3}" r="{:.3}" fill="#4c72b0" fill-opacity="0.12" stroke="#4c72b0" stroke-width="1.5" data-center="{}" data-radius="{}"/>"##,
                d.radius * SCALE,
                d.center,
                d.radius
            );
        } else {
            let _ = writeln!(
                s,
                r##"    <circle class="disk point" cx="{cx:.3}" cy="{cy:.3}" r="{POINT_DISK_RADIUS}" fill="#4c72b0" data-center="{}" data-radius="0"/>"##,
                d.center
            );
        }
    }
    let _ = writeln!(s, "  </g>");

    let _ = writeln!(
        s,
        r##"  <g class="eigenvalues" stroke="#c44e52" stroke-width="2">"##
    );
    for z in eigenvalues {
        let (x, y) = to_px(*z);
        let h = MARKER_HALF;
        let _ = writeln!(
            s,
            r#"    <path class="eigenvalue" d="M{:.3} {:.3}L{:.3} {:.3}M{:.3} {:.3}L{:.3} {:.3}" data-re="{}" data-im="{}"/>"#,
            x - h,
            y - h,
            x + h,
            y + h,
            x - h,
            y + h,
            x + h,
            y - h,
            z.re,
            z.im
        );
    }
    let _ = writeln!(s, "  </g>");
    s.push_str("</svg>\n");
    s
}

pub fn emit_svg(report: &AnalysisReport) -> String {
    let name = report
        .operator
        .as_ref()
        .map_or_else(|| report.config.operator.kind().to_string(), |o| o.name.clone());
    match &report.spectrum {
        Some(sp) => spectrum_svg(
            &format!("{name}: {}", sp.classification.as_str()),
            &sp.values(),
            &sp.disks,
        ),
        None => spectrum_svg(&format!("{name}: no spectrum"), &[], &[]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use pouspec::spectrum::{eigenvalues, gershgorin_disks};
    use pouspec::CollocationMatrix;

    fn count(s: &str, needle: &str) -> usize {
        s.matches(needle).count()
    }

    #[test]
    fn identity_has_two_point_disks_at_one() {
        let m = CollocationMatrix::identity(2);
        let svg = spectrum_svg("id", &eigenvalues(&m).unwrap(), &gershgorin_disks(&m));
        assert_eq!(count(&svg, r#"class="disk point" cx="733.333" cy="400.000""#), 2);
        assert_eq!(count(&svg, r#"class="eigenvalue""#), 2);
    }

    #[test]
    fn swap_disk_is_the_unit_circle() {
        let m = CollocationMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let svg = spectrum_svg("swap", &eigenvalues(&m).unwrap(), &gershgorin_disks(&m));
        assert!(svg.contains(r#"class="unit-circle" cx="400.000" cy="400.000" r="333.333""#));
        assert_eq!(
            count(&svg, r#"class="disk" cx="400.000" cy="400.000" r="333.333""#),
            2
        );
        assert!(svg.contains(r#"data-re="-1" data-im="0""#));
    }

    #[test]
    fn bernstein_two_disks() {
        let disks = [
            GershgorinDisk {
                center: 1.0,
                radius: 0.0,
            },
            GershgorinDisk {
                center: 0.5,
                radius: 0.5,
            },
            GershgorinDisk {
                center: 1.0,
                radius: 0.0,
            },
        ];
        let svg = spectrum_svg("b2", &[], &disks);
        assert_eq!(count(&svg, r#"class="disk point" cx="733.333""#), 2);
        assert!(svg.contains(r#"class="disk" cx="566.667" cy="400.000" r="166.667""#));
    }

    #[test]
    fn title_is_escaped() {
        assert!(spectrum_svg("a<b", &[], &[]).contains("<title>a&lt;b</title>"));
    }
}
