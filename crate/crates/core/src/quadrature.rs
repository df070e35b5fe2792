//! Composite Newton-Cotes rules on uniformly spaced samples.

use crate::scalar::Real;

/// Integrates uniformly spaced samples `values` with spacing `h`.
///
/// Composite Simpson is used on an even number of intervals; an odd count
/// closes with Simpson's 3/8 rule on the last three intervals. Two samples
/// fall back to the trapezoid rule. Summation order is fixed.
pub fn composite_simpson<T: Real>(values: &[T], h: T) -> T {
    let n = values.len();
    match n {
        0 | 1 => T::zero(),
        2 => h * (values[0] + values[1]) / T::lit(2.0),
        _ => {
            let intervals = n - 1;
            if intervals.is_multiple_of(2) {
                simpson_even(values, h)
            } else {
                let split = intervals - 3;
                let head = if split > 0 {
                    simpson_even(&values[..=split], h)
                } else {
                    T::zero()
                };
                let tail = &values[split..];
                let three_eighths = T::lit(3.0) * h / T::lit(8.0);
                head + three_eighths * (tail[0] + T::lit(3.0) * (tail[1] + tail[2]) + tail[3])
            }
        }
    }
}

fn simpson_even<T: Real>(values: &[T], h: T) -> T {
    let last = values.len() - 1;
    let mut odd = T::zero();
    let mut even = T::zero();
    for (k, v) in values.iter().enumerate().take(last).skip(1) {
        if k % 2 == 1 {
            odd = odd + *v;
        } else {
            even = even + *v;
        }
    }
    h / T::lit(3.0) * (values[0] + values[last] + T::lit(4.0) * odd + T::lit(2.0) * even)
}
