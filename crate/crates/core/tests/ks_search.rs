use contextlab::ks::{
    self, build_rayset, ks_search, propagate_only, validate_assignment, KsAssignment, RaySetFile,
};
use contextlab::linalg::C;
use contextlab::Error;

fn c(re: f64, im: f64) -> C<f64> {
    C::new(re, im)
}

/// Sets of `dim` mutually orthogonal rays, counted by brute-force extension.
fn count_full_cliques(rs: &ks::RaySet<f64>) -> usize {
    let rays = rs.rays();
    let orth = |i: usize, j: usize| {
        let z: C<f64> = rays[i]
            .amplitudes
            .iter()
            .zip(&rays[j].amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum();
        z.norm() < 1e-9
    };
    fn extend(
        clique: &mut Vec<usize>,
        start: usize,
        n: usize,
        dim: usize,
        orth: &dyn Fn(usize, usize) -> bool,
    ) -> usize {
        if clique.len() == dim {
            return 1;
        }
        let mut count = 0;
        for k in start..n {
            if clique.iter().all(|&i| orth(i, k)) {
                clique.push(k);
                count += extend(clique, k + 1, n, dim, orth);
                clique.pop();
            }
        }
        count
    }
    extend(&mut Vec::new(), 0, rays.len(), rs.dim(), &orth)
}

#[test]
fn builtin_sizes() {
    let rs = ks::builtin_34_rays::<f64>();
    assert_eq!((rs.len(), rs.dim()), (34, 8));
    assert!(!rs.bases_declared());
    assert_eq!(rs.bases().len(), count_full_cliques(&rs));
    let rs = ks::builtin_48_rays::<f64>();
    assert_eq!((rs.len(), rs.dim()), (48, 8));
    assert!(rs.bases_declared());
}

#[test]
fn preselection_zeroes_the_bell_rays() {
    let rs = ks::builtin_34_rays::<f64>();
    let pre = rs.resolve(&[("psi_i", true), ("psi_f", true)]).unwrap();
    let vals = propagate_only(&rs, &pre).unwrap().unwrap();
    for (r, v) in rs.rays().iter().zip(&vals) {
        if r.label.starts_with("Phi") {
            assert_eq!(*v, Some(false), "{}", r.label);
        }
    }
}

#[test]
fn orthonormal_basis_is_satisfiable() {
    let rays = (0..3)
        .map(|k| {
            let mut v = vec![c(0.0, 0.0); 3];
            v[k] = c(1.0, 0.0);
            (format!("e{k}"), v)
        })
        .collect();
    let rs = build_rayset::<f64>(rays, None, 1e-10).unwrap();
    let r = ks_search(&rs, &[]).unwrap();
    let a = r.assignment.unwrap();
    assert!(validate_assignment(&rs, &a).is_empty());
    assert_eq!(a.ones().len(), 1);
    assert!(!validate_assignment(
        &rs,
        &KsAssignment {
            values: vec![true, true, false]
        }
    )
    .is_empty());
}

#[test]
fn contradictory_preassignment_is_rejected() {
    let rs = ks::builtin_48_rays::<f64>();
    let basis = rs.bases()[0].clone();
    let r = ks_search(&rs, &[(basis[0], true), (basis[1], true)]);
    assert!(matches!(r, Err(Error::ContractViolation(_))));
}

#[test]
fn non_unit_rays_are_rejected() {
    let r = build_rayset::<f64>(
        vec![("a".into(), vec![c(1.0, 0.0), c(1.0, 0.0)])],
        None,
        1e-10,
    );
    assert!(matches!(r, Err(Error::ContractViolation(_))));
}

#[test]
fn file_round_trip_keeps_the_verdict() {
    let rs = ks::builtin_48_rays::<f64>();
    let text = rs.to_file().to_json();
    let back = RaySetFile::from_json(&text)
        .unwrap()
        .build::<f64>(1e-10)
        .unwrap();
    assert_eq!(back.len(), rs.len());
    assert!(!ks_search(&back, &[]).unwrap().satisfiable);
}
