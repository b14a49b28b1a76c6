//! Published optimal parameters for the test systems.

use gsor_core::problems::Example;

/// Grid sizes covered by the tables.
pub const GRID_SIZES: [usize; 6] = [16, 32, 64, 128, 256, 512];

const MHSS: [[f64; 6]; 4] = [
    [1.06, 0.75, 0.54, 0.40, 0.30, 0.21],
    [0.21, 0.08, 0.04, 0.02, 0.01, 0.005],
    [1.61, 1.01, 0.53, 0.26, 0.13, 0.07],
    [0.37, 0.09, 0.021, 0.005, 0.002, 0.0005],
];

const GSOR: [[f64; 6]; 4] = [
    [0.550, 0.495, 0.457, 0.432, 0.428, 0.412],
    [0.455, 0.455, 0.455, 0.455, 0.455, 0.457],
    [0.908, 0.776, 0.566, 0.353, 0.199, 0.105],
    [0.862, 0.862, 0.862, 0.862, 0.862, 0.862],
];

fn column(m: usize) -> Option<usize> {
    GRID_SIZES.iter().position(|&g| g == m)
}

fn row(example: Example) -> usize {
    example.number() as usize - 1
}

/// Tabulated MHSS parameter, if `m` is one of [`GRID_SIZES`].
pub fn mhss_alpha(example: Example, m: usize) -> Option<f64> {
    column(m).map(|j| MHSS[row(example)][j])
}

/// Tabulated GSOR parameter, if `m` is one of [`GRID_SIZES`].
pub fn gsor_alpha(example: Example, m: usize) -> Option<f64> {
    column(m).map(|j| GSOR[row(example)][j])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup() {
        assert_eq!(gsor_alpha(Example::Ex3, 64), Some(0.566));
        assert_eq!(mhss_alpha(Example::Ex4, 512), Some(0.0005));
        assert_eq!(gsor_alpha(Example::Ex1, 20), None);
        for ex in Example::ALL {
            for m in GRID_SIZES {
                let a = gsor_alpha(ex, m).unwrap();
                assert!(a > 0.0 && a <= 1.0);
            }
        }
    }
}
