/// Pairwise (tree) summation. Fixed association order, so results do not
/// depend on how the terms were produced.
pub fn pairwise_sum(terms: &[f64]) -> f64 {
    const LEAF: usize = 16;
    if terms.len() <= LEAF {
        return terms.iter().sum();
    }
    let mid = terms.len() / 2;
    pairwise_sum(&terms[..mid]) + pairwise_sum(&terms[mid..])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_exact_small_integers() {
        let v: Vec<f64> = (1..=1000).map(f64::from).collect();
        assert_eq!(pairwise_sum(&v), 500500.0);
        assert_eq!(pairwise_sum(&[]), 0.0);
    }

    #[test]
    fn better_than_naive_on_many_tenths() {
        let v = vec![0.1; 1 << 20];
        let exact = 0.1 * (1u64 << 20) as f64;
        let naive: f64 = v.iter().sum();
        assert!((pairwise_sum(&v) - exact).abs() <= (naive - exact).abs());
    }
}
