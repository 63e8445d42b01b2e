/// Euclidean projection of `v` onto `{w >= 0, sum w = t}` restricted to the
/// entries where `active` holds; inactive entries are set to zero.
///
/// Sort-based: the threshold `theta` is found from the sorted active values
/// and `w_i = max(v_i - theta, 0)`.
pub fn project_simplex(v: &[f64], t: f64, active: &[bool], out: &mut [f64]) {
    let mut sorted: Vec<f64> = v
        .iter()
        .zip(active)
        .filter_map(|(&x, &a)| a.then_some(x))
        .collect();
    sorted.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (k, &u) in sorted.iter().enumerate() {
        cum += u;
        let cand = (cum - t) / (k + 1) as f64;
        if u - cand > 0.0 {
            theta = cand;
        } else {
            break;
        }
    }
    for ((o, &x), &a) in out.iter_mut().zip(v).zip(active) {
        *o = if a { (x - theta).max(0.0) } else { 0.0 };
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projects_onto_simplex() {
        let v = [0.5, 2.0, -1.0, 0.7];
        let mut w = [0.0; 4];
        project_simplex(&v, 1.0, &[true; 4], &mut w);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(w.iter().all(|&x| x >= 0.0));
        assert_eq!(w, [0.0, 1.0, 0.0, 0.0]);
        project_simplex(&[0.3, 0.3, 0.3], 1.5, &[true; 3], &mut w[..3]);
        assert!(w[..3].iter().all(|&x| (x - 0.5).abs() < 1e-15));
    }

    #[test]
    fn inactive_entries_stay_zero() {
        let mut w = [0.0; 3];
        project_simplex(&[5.0, 1.0, 1.0], 1.0, &[false, true, true], &mut w);
        assert_eq!(w, [0.0, 0.5, 0.5]);
    }

    #[test]
    fn projection_is_idempotent_and_optimal() {
        let v: Vec<f64> = (0..50).map(|i| ((i * 37 % 11) as f64 - 5.0) / 3.0).collect();
        let act = vec![true; 50];
        let mut w = vec![0.0; 50];
        project_simplex(&v, 2.0, &act, &mut w);
        let mut w2 = vec![0.0; 50];
        project_simplex(&w, 2.0, &act, &mut w2);
        assert!(w.iter().zip(&w2).all(|(a, b)| (a - b).abs() < 1e-14));
        // optimality: v - w is constant on the support and not larger off it
        let theta: Vec<f64> = v.iter().zip(&w).filter(|(_, &x)| x > 0.0).map(|(a, b)| a - b).collect();
        let th = theta[0];
        assert!(theta.iter().all(|&x| (x - th).abs() < 1e-12));
        assert!(v.iter().zip(&w).filter(|(_, &x)| x == 0.0).all(|(a, _)| *a <= th + 1e-12));
    }
}
