use super::*;
use crate::algebra::{SparseMatrix, F2};
use crate::complex::{FilteredChainComplex, Generator};
use crate::level::{int, Extended};
use crate::scomplex::SComplex;

fn s0() -> SComplex {
    let irr =
        FilteredChainComplex::from_ids(vec![Generator::new("x", 3, int(2))], vec![], true).unwrap();
    SComplex::new(
        irr,
        vec![Generator::new("Theta", 2, int(0))],
        SparseMatrix::zeros(1, 1),
        SparseMatrix::from_entries(1, 1, vec![(0, 0, F2::ONE)]).unwrap(),
        SparseMatrix::zeros(1, 1),
    )
    .unwrap()
}

fn nonzero(p: &Page) -> Vec<((u8, i64), usize)> {
    p.cells
        .iter()
        .filter(|(_, d)| **d > 0)
        .map(|(k, d)| (*k, *d))
        .collect()
}

#[test]
fn reference_instance_pages() {
    let s = s0();
    let closed = pages_closed_form(&s).unwrap();
    let generic = pages_generic(&s).unwrap();
    for (a, b) in closed.iter().zip(&generic) {
        assert!(a.same_dims(b), "page {}: {:?} vs {:?}", a.r, a, b);
    }
    assert_eq!(
        nonzero(&closed[1]),
        vec![((1, 3), 1), ((2, 0), 1), ((3, 0), 1)]
    );
    assert_eq!(closed[1].rank_from(3, 0), 1);
    assert_eq!(nonzero(&closed[2]), vec![((1, 3), 1)]);
    assert_eq!(nonzero(&closed[3]), vec![((1, 3), 1)]);
    let rec = abutment(&s).unwrap();
    assert!(rec.holds());
    let row = rec.rows.iter().find(|r| r.degree == 4).unwrap();
    assert_eq!((row.homology_dim, row.pieces), (1, [1, 0, 0]));
}

#[test]
fn zero_maps_and_empty() {
    // a, b in degree 0 and 1 with d b = a, plus a loose c in degree 2 and Θ in degree 1
    let irr = FilteredChainComplex::from_ids(
        vec![
            Generator::new("a", 0, int(0)),
            Generator::new("b", 1, int(1)),
            Generator::new("c", 2, int(0)),
        ],
        vec![("b".into(), "a".into(), F2::ONE)],
        true,
    )
    .unwrap();
    let s = SComplex::new(
        irr,
        vec![Generator::new("Theta", 1, int(0))],
        SparseMatrix::zeros(3, 3),
        SparseMatrix::zeros(1, 3),
        SparseMatrix::zeros(3, 1),
    )
    .unwrap();
    let closed = pages_closed_form(&s).unwrap();
    assert_eq!(closed[1].cells, closed[3].cells);
    let rec = abutment(&s).unwrap();
    assert!(rec.holds());
    for row in &rec.rows {
        let n = row.degree;
        let expect =
            s.irr().rank_in_degree(n) + s.irr().rank_in_degree(n - 1) + s.red().rank_in_degree(n);
        // H(C) is c in degree 2 only
        let h = |m: i64| usize::from(m == 2);
        assert_eq!(
            row.homology_dim,
            h(n) + h(n - 1) + s.red().rank_in_degree(n)
        );
        assert!(row.homology_dim <= expect);
    }
    let z = SComplex::zero();
    assert!(pages_generic(&z)
        .unwrap()
        .iter()
        .all(|p| p.total_dim() == 0));
    assert!(abutment(&z).unwrap().holds());
}

#[test]
fn theorem_on_reference_instance() {
    let s = s0();
    let rep = check_lambda_rho(&s, 3).unwrap();
    assert!(rep.first.holds);
    assert_eq!(rep.first.lambda, Extended::Infinity);
    assert_eq!(rep.first.rho, Extended::Infinity);
    assert_eq!(rep.first.inequality, Some(true));
    let rep4 = check_lambda_rho(&s, 4).unwrap();
    assert!(rep4.first.holds);
    assert_eq!(rep4.first.lambda, Extended::Finite(int(2)));
    assert_eq!(rep4.first.rho, Extended::Finite(int(2)));
    // δ₁* is nonzero on H_3, so the second hypothesis fails in degree 3
    assert!(!rep.second.holds);
}

#[test]
fn unfiltered_second_hypothesis_is_not_enough() {
    // α (deg 2, level 0), β (deg 1, level 10), γ (deg 0, level 0); d β = γ, u α = γ
    let irr = FilteredChainComplex::from_ids(
        vec![
            Generator::new("alpha", 2, int(0)),
            Generator::new("beta", 1, int(10)),
            Generator::new("gamma", 0, int(0)),
        ],
        vec![("beta".into(), "gamma".into(), F2::ONE)],
        true,
    )
    .unwrap();
    let u = SparseMatrix::from_entries(3, 3, vec![(2, 0, F2::ONE)]).unwrap();
    let s = SComplex::new(
        irr,
        vec![],
        u,
        SparseMatrix::zeros(0, 3),
        SparseMatrix::zeros(3, 0),
    )
    .unwrap();
    let rep = check_lambda_rho(&s, 2).unwrap();
    assert!(rep.second_unfiltered);
    assert!(!rep.second.holds);
    // the unfiltered reading would assert 0 >= 10
    assert_eq!(rep.second.lambda, Extended::Finite(int(0)));
    assert_eq!(rep.second.rho, Extended::Finite(int(10)));
}
