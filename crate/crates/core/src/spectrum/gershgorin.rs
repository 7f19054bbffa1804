use num_complex::Complex64;
use serde::Serialize;

use super::matrix::CollocationMatrix;

/// `{ z : |z - center| <= radius }`, with `center` a diagonal entry and
/// `radius` the off-diagonal absolute row sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GershgorinDisk {
    pub center: f64,
    pub radius: f64,
}

impl GershgorinDisk {
    pub fn contains(&self, z: Complex64, slack: f64) -> bool {
        (z - self.center).norm() <= self.radius + slack
    }
}

pub fn gershgorin_disks(m: &CollocationMatrix) -> Vec<GershgorinDisk> {
    (0..m.dim())
        .map(|k| {
            let row = m.row(k);
            let radius = row
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, v)| v.abs())
                .sum();
            GershgorinDisk {
                center: row[k],
                radius,
            }
        })
        .collect()
}

pub fn in_disk_union(z: Complex64, disks: &[GershgorinDisk], slack: f64) -> bool {
    disks.iter().any(|d| d.contains(z, slack))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let d = gershgorin_disks(&CollocationMatrix::identity(2));
        assert_eq!(
            d,
            vec![
                GershgorinDisk {
                    center: 1.0,
                    radius: 0.0
                };
                2
            ]
        );
        let k = CollocationMatrix::from_rows(&[vec![0.75, 0.25], vec![0.25, 0.75]]).unwrap();
        assert_eq!(
            gershgorin_disks(&k),
            vec![
                GershgorinDisk {
                    center: 0.75,
                    radius: 0.25
                };
                2
            ]
        );
        let s = CollocationMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let d = gershgorin_disks(&s);
        assert_eq!(
            d,
            vec![
                GershgorinDisk {
                    center: 0.0,
                    radius: 1.0
                };
                2
            ]
        );
        assert!(in_disk_union(Complex64::new(-1.0, 0.0), &d, 0.0));
        assert!(!in_disk_union(Complex64::new(-1.0, 0.1), &d, 1e-9));
    }

    #[test]
    fn negative_entries_use_absolute_values() {
        let m = CollocationMatrix::from_rows(&[vec![1.0, -0.5], vec![0.2, 0.3]]).unwrap();
        assert_eq!(gershgorin_disks(&m)[0].radius, 0.5);
    }
}
