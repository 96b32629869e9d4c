//! Small descriptive statistics used for imputation and summaries.

use alloc::vec::Vec;

/// Median of the values; mean of the two middle values for an even count.
/// `None` for an empty input.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut sorted: Vec<f64> = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    Some(if sorted.len().is_multiple_of(2) {
        0.5 * (sorted[mid - 1] + sorted[mid])
    } else {
        sorted[mid]
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_even_empty() {
        assert_eq!(median(&[]), None);
        assert_eq!(median(&[90.0, 20.0, 50.0]), Some(50.0));
        assert_eq!(median(&[0.1, 0.4]), Some(0.25));
        assert_eq!(median(&[7.0]), Some(7.0));
    }
}
