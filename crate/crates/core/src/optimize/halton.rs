const PRIMES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

/// Van der Corput radical inverse of `index` in `base`.
pub fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv_base = 1.0 / base as f64;
    let mut scale = inv_base;
    let mut out = 0.0;
    while index > 0 {
        out += (index % base) as f64 * scale;
        index /= base;
        scale *= inv_base;
    }
    out
}

/// Coordinate `dim` of the Halton point `index`, in `[0, 1)`.
pub fn halton(index: u64, dim: usize) -> f64 {
    radical_inverse(index, PRIMES[dim])
}

pub const MAX_DIMS: usize = PRIMES.len();

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_two_sequence() {
        let v: std::vec::Vec<f64> = (1..6).map(|i| radical_inverse(i, 2)).collect();
        assert_eq!(v, [0.5, 0.25, 0.75, 0.125, 0.625]);
    }

    #[test]
    fn base_three_first_terms() {
        assert!((halton(1, 1) - 1.0 / 3.0).abs() < 1e-15);
        assert!((halton(4, 1) - 4.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn stratifies_unit_interval() {
        // first 2^k points in base 2 hit every dyadic cell once
        let mut cells = [0u32; 16];
        for i in 0..16 {
            cells[(radical_inverse(i, 2) * 16.0) as usize] += 1;
        }
        assert!(cells.iter().all(|&c| c == 1));
    }
}
