mod common;

use common::snf_oracle;
use fpcube::pieces::{check_classical_cprime, check_cstar, Ratio};
use fpcube::presentation::{torus_example, Presentation};
use fpcube::pride::{gen_corollary_presentation, gen_remark_params, remark_presentation};
use fpcube::snf::{abelianization_torsion_check, exponent_matrix, smith_normal_form};
use fpcube::word::{FactorDescriptor, FactorKind};
use proptest::prelude::*;

#[test]
fn torus_example_m21_passes_at_20() {
    let rep = check_cstar(&torus_example(21), 20).unwrap();
    assert!(rep.passed);
    assert_eq!(rep.worst_piece.unwrap().syllable_length, 2);
    assert_eq!(rep.worst_ratio, Ratio::new(2, 42));
    assert!(!check_cstar(&torus_example(21), 25).unwrap().passed);
}

#[test]
fn torus_example_m2_fails_at_6() {
    let rep = check_cstar(&torus_example(2), 6).unwrap();
    assert!(!rep.passed);
    assert_eq!(rep.worst_ratio, Ratio::new(2, 4));
}

#[test]
fn cstar_rejects_small_n() {
    assert!(check_cstar(&torus_example(2), 1).is_err());
}

fn parse(text: &str) -> Presentation {
    Presentation::parse(text).unwrap()
}

#[test]
fn classical_power_relator_fails() {
    let p = parse("fpcube-presentation 1\nfactor X free 1 x\nrelator x^10\n");
    let rep = check_classical_cprime(&p, 2).unwrap();
    assert!(!rep.passed);
    assert_eq!(rep.worst_piece.unwrap().letter_length, 9);
}

#[test]
fn classical_disjoint_alphabets() {
    // only the repeated letter of y^2 (resp. w^2) is a piece: ratio 1/3
    let p = parse(
        "fpcube-presentation 1\nfactor X free 1 x\nfactor Y free 1 y\nfactor Z free 1 z\nfactor W free 1 w\n\
         relator x^1 y^2\nrelator z^1 w^2\n",
    );
    let rep = check_classical_cprime(&p, 2).unwrap();
    assert!(rep.passed);
    assert_eq!(rep.worst_ratio, Ratio::new(1, 3));
}

#[test]
fn classical_requires_rank_one_free() {
    assert!(check_classical_cprime(&torus_example(2), 2).is_err());
}

#[test]
fn remark_n2_is_cprime() {
    let p = remark_presentation(2).unwrap();
    assert_eq!(p.relators.len(), 6);
    let rep = check_classical_cprime(&p, 2).unwrap();
    assert!(rep.passed, "{:?}", rep.worst_ratio);
    for i in 0..5 {
        assert!(rep.max_piece_per_relator[i] <= 150 * 2 + 1);
    }
    assert!(p.relators[5].letter_length() >= 600 * 4);
}

#[test]
fn remark_regenerates_for_small_n() {
    for n in 2..=4 {
        let p = remark_presentation(n).unwrap();
        assert!(check_classical_cprime(&p, n).unwrap().passed, "n = {n}");
    }
}

#[test]
fn remark_r6_length_at_20() {
    let p = gen_remark_params(20).unwrap();
    let len: u64 = 2 * p.tau.iter().chain(&p.theta).sum::<u64>();
    assert!(len >= 600 * 20 * 20);
}

fn two_rank2_abelian() -> Vec<FactorDescriptor> {
    vec![
        FactorDescriptor::new("A", FactorKind::Abelian, vec!["a".into(), "b".into()]).unwrap(),
        FactorDescriptor::new("C", FactorKind::Abelian, vec!["c".into(), "d".into()]).unwrap(),
    ]
}

#[test]
fn corollary_two_abelian_factors() {
    let p = gen_corollary_presentation(&two_rank2_abelian(), 20).unwrap();
    assert_eq!(p.relators.len(), 24);
    assert!(p.relators.iter().all(|r| r.syllable_length() >= 6 * 20));
    assert!(check_cstar(&p, 20).unwrap().passed);
    assert!(abelianization_torsion_check(&p).unwrap());
}

#[test]
fn corollary_free_factors_small_n() {
    let fs = vec![
        FactorDescriptor::new("F", FactorKind::Free, vec!["x1".into(), "x2".into()]).unwrap(),
        FactorDescriptor::new("G", FactorKind::Free, vec!["y1".into()]).unwrap(),
        FactorDescriptor::new("H", FactorKind::Abelian, vec!["z1".into(), "z2".into()]).unwrap(),
    ];
    let p = gen_corollary_presentation(&fs, 3).unwrap();
    assert_eq!(p.relators.len(), 6 * (2 + 4 + 2));
    assert!(check_cstar(&p, 3).unwrap().passed);
    assert!(gen_corollary_presentation(&fs[..1], 3).is_err());
}

#[test]
fn lemma_presentation_has_torsion_abelianization() {
    let p = remark_presentation(2).unwrap();
    let m = exponent_matrix(&p);
    let k = 6;
    assert_eq!(m.rows[3], vec![2 * k, 0]);
    assert_eq!(m.rows[4], vec![0, 2 * k]);
    assert!(abelianization_torsion_check(&p).unwrap());
    let single = parse("fpcube-presentation 1\nfactor X free 1 x\nfactor Y free 1 y\nrelator x^1 y^1\n");
    assert!(!abelianization_torsion_check(&single).unwrap());
}

proptest! {
    #[test]
    fn snf_matches_determinantal_divisors(entries in prop::collection::vec(-9i64..=9, 16)) {
        let m: Vec<Vec<i64>> = entries.chunks(4).map(|c| c.to_vec()).collect();
        let d = smith_normal_form(&m, 4).unwrap();
        prop_assert_eq!(&d, &snf_oracle(&m));
        for w in d.windows(2) {
            prop_assert!(w[1] == 0 || (w[0] != 0 && w[1] % w[0] == 0));
        }
    }

    #[test]
    fn snf_preserves_abs_det(entries in prop::collection::vec(-9i64..=9, 9)) {
        let m: Vec<Vec<i64>> = entries.chunks(3).map(|c| c.to_vec()).collect();
        let d = smith_normal_form(&m, 3).unwrap();
        let det = {
            let a = |i: usize, j: usize| m[i][j] as i128;
            a(0,0)*(a(1,1)*a(2,2)-a(1,2)*a(2,1)) - a(0,1)*(a(1,0)*a(2,2)-a(1,2)*a(2,0)) + a(0,2)*(a(1,0)*a(2,1)-a(1,1)*a(2,0))
        };
        prop_assert_eq!(d.iter().product::<i128>(), det.abs());
    }
}
