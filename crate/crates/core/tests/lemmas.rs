use lanczos_trace::monitor::lemmas::*;
use proptest::prelude::*;

const SLACK: f64 = 1e-12;

#[test]
fn geometric_equality_case() {
    let a: Vec<f64> = (1..400).map(|i| 0.5f64.powi(i)).collect();
    let t = 0.125;
    let ratio = tail_window_ratio(&a, 1, 4);
    assert!((ratio - t / (1.0 - t)).abs() < 1e-14);
    assert_eq!(monotone_bound(t, 400, 1, 4), t / (1.0 - t));
}

#[test]
fn short_tail_uses_tighter_bound() {
    let a: Vec<f64> = (1..8).map(|i| 0.5f64.powi(i)).collect();
    // n = 8, m = 1, m' = 5: n - m' = 3 <= 4 = m' - m.
    let t = 1.0 / 16.0;
    assert!(tail_window_ratio(&a, 1, 5) <= t);
    assert_eq!(monotone_bound(t, 8, 1, 5), t);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn geometric_sequences(c in 0.01f64..0.99, len in 3usize..120, m in 1usize..40, gap in 1usize..40, scale in 1e-8f64..1e8, loose in 0.0f64..0.5) {
        let n = len + 1;
        prop_assume!(m + gap <= len);
        let m2 = m + gap;
        let a: Vec<f64> = (0..len).map(|i| scale * c.powi(i as i32)).collect();
        let t = (a[m2 - 1] / a[m - 1]) + loose * (1.0 - a[m2 - 1] / a[m - 1]);
        prop_assume!(t < 1.0);
        let ratio = tail_window_ratio(&a, m, m2);
        prop_assert!(ratio <= monotone_bound(t, n, m, m2) * (1.0 + SLACK), "{ratio} vs t = {t}");
    }

    #[test]
    fn nonincreasing_ratio_sequences(mut ratios in prop::collection::vec(0.02f64..0.999, 2..100), a1 in 1e-6f64..1e6, m in 1usize..50, gap in 1usize..50, loose in 0.0f64..0.5) {
        ratios.sort_by(|x, y| y.partial_cmp(x).unwrap());
        let mut a = vec![a1];
        for r in &ratios {
            a.push(a[a.len() - 1] * r);
        }
        let len = a.len();
        prop_assume!(m + gap <= len);
        let m2 = m + gap;
        let t = (a[m2 - 1] / a[m - 1]) + loose * (1.0 - a[m2 - 1] / a[m - 1]);
        prop_assume!(t < 1.0);
        let ratio = tail_window_ratio(&a, m, m2);
        prop_assert!(ratio <= monotone_bound(t, len + 1, m, m2) * (1.0 + SLACK), "{ratio} vs t = {t}");
    }

    #[test]
    fn power_then_geometric_sequences(p in 0.05f64..4.0, m in 1usize..30, s_gap in 2usize..60, extra in 1usize..200, pick in 0.0f64..1.0, loose in 0.0f64..0.5) {
        let s = m + s_gap;
        let n = s + extra;
        let m2 = m + 1 + ((s - m - 1) as f64 * pick) as usize;
        prop_assume!(m2 > m && m2 < s);
        let a = power_then_geometric(m, s, n, p);
        prop_assert_eq!(a.len(), n - m);
        let (am, am2) = (a[0], a[m2 - m]);
        let t = am2 / am + loose * (1.0 - am2 / am);
        prop_assume!(t < 1.0);
        let ratio = tail_window_ratio(&a, 1, m2 - m + 1);
        let bound = power_then_geometric_bound(p, t, m2, s);
        prop_assert!(ratio <= bound * (1.0 + SLACK), "{ratio} vs {bound}");
    }
}

#[test]
fn power_then_geometric_is_smooth_at_transition() {
    let (m, s, n, p) = (2, 10, 30, 1.5);
    let a = power_then_geometric(m, s, n, p);
    let c = (9.0f64 / 10.0).powf(2.5);
    let k = s - m;
    assert!((a[k] / a[k - 1] - c).abs() < 1e-14);
    assert!((a[k + 1] / a[k] - c).abs() < 1e-14);
}
