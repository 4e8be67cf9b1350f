use eigenflow::field::Zp;
use eigenflow::geometry::Point;
use eigenflow::morse_flow::{bd, Chain};
use eigenflow::persistence::{reduce, Persistence};
use eigenflow::simplicial::{build_filtration, Filtration, PointSet};
use proptest::prelude::*;

const P: u32 = 1009;

/// Matrix of the inclusion `H1(K_k) -> H1(K_m)`, one column per basis class.
fn inclusion(pers: &Persistence, filt: &Filtration, k: usize, m: usize) -> Vec<Vec<u32>> {
    pers.basis_at(k)
        .into_iter()
        .map(|g| pers.class_coordinates(filt, &pers.rep_chain(filt, g), m).unwrap())
        .collect()
}

fn apply(f: Zp, cols: &[Vec<u32>], x: &[u32], rows: usize) -> Vec<u32> {
    let mut y = vec![0; rows];
    for (col, &a) in cols.iter().zip(x) {
        for (yi, &c) in y.iter_mut().zip(col) {
            *yi = f.add(*yi, f.mul(a, c));
        }
    }
    y
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn inclusions_compose(
        raw in prop::collection::vec((0.0..1.0f64, 0.0..1.0f64), 8..40),
        picks in prop::collection::vec(any::<u32>(), 3),
        coeffs in prop::collection::vec(0u32..P, 64),
    ) {
        let f = Zp::new(P).unwrap();
        let pts: Vec<Point> = raw.into_iter().map(|(x, y)| Point { x, y }).collect();
        let space = PointSet::euclidean(pts).unwrap();
        let filt = build_filtration(&space).unwrap();
        let pers = reduce(&filt, f);
        let n = filt.num_ranks();
        let mut r: Vec<usize> = picks.iter().map(|&x| x as usize % n).collect();
        r.sort_unstable();
        let (i, k, m) = (r[0], r[1], r[2]);

        // a random cycle of K_i: basis classes plus boundaries of triangles
        let mut c = Chain::zero(f);
        let mut it = coeffs.iter();
        for g in pers.basis_at(i) {
            c = c.add(&pers.rep_chain(&filt, g).scale(*it.next().unwrap()));
        }
        for e in filt.entries().iter().filter(|e| e.rank <= i && e.simplex.dim() == 2).take(20) {
            c = c.add(&bd(&Chain::simplex(f, e.simplex, 1)).scale(*it.next().unwrap()));
        }

        let at_i = pers.class_coordinates(&filt, &c, i).unwrap();
        let at_k = pers.class_coordinates(&filt, &c, k).unwrap();
        let at_m = pers.class_coordinates(&filt, &c, m).unwrap();
        let dk = pers.basis_at(k).len();
        let dm = pers.basis_at(m).len();
        prop_assert_eq!(&apply(f, &inclusion(&pers, &filt, i, k), &at_i, dk), &at_k);
        prop_assert_eq!(&apply(f, &inclusion(&pers, &filt, k, m), &at_k, dm), &at_m);
        prop_assert_eq!(&apply(f, &inclusion(&pers, &filt, i, m), &at_i, dm), &at_m);
    }
}
