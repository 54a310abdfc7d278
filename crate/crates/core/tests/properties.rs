use farey_core::counting::{dress_grid, Sieve};
use farey_core::generator::{farey_stream, segment_around, similar_order_radius};
use farey_core::rational::{are_farey_neighbors, similarly_ordered};
use farey_core::scanner::{f_of_n, local_density, upper_bound, witness_check};
use farey_core::{FareyOrder, Fraction};
use proptest::prelude::*;

fn order(n: u64) -> FareyOrder {
    FareyOrder::new(n).unwrap()
}

fn reduced_with_den(b: u64) -> impl Iterator<Item = Fraction> {
    (1..b).filter_map(move |a| Fraction::new(a, b).ok().filter(|f| f.den() == b))
}

fn is_contiguous_run(stream: &[Fraction], run: &[Fraction]) -> bool {
    match stream.binary_search(&run[0]) {
        Ok(i) => stream.get(i..i + run.len()) == Some(run),
        Err(_) => false,
    }
}

#[test]
fn segments_are_runs_of_the_stream() {
    for b in 2..=20u64 {
        for n in [5 * b - 1, 5 * b, 7 * b + 3, 200] {
            let stream: Vec<_> = farey_stream(order(n)).collect();
            for center in reduced_with_den(b) {
                let seg = segment_around(center, order(n)).unwrap();
                let run = seg.run();
                assert!(run.windows(2).all(|w| w[0] < w[1]));
                assert!(run.iter().all(|x| x.den() <= n));
                assert!(is_contiguous_run(&stream, &run), "{center} at n = {n}");
            }
        }
    }
}

#[test]
fn segment_sides_are_arithmetic_progressions() {
    let seg = segment_around(Fraction::new(3, 7).unwrap(), order(100)).unwrap();
    for w in seg.left.windows(2) {
        assert_eq!((w[1].num() - w[0].num(), w[1].den() - w[0].den()), (3, 7));
    }
    for w in seg.right.windows(2) {
        assert_eq!((w[0].num() - w[1].num(), w[0].den() - w[1].den()), (3, 7));
    }
}

#[test]
fn rank_agrees_with_stream_on_grid() {
    let grid = dress_grid(order(20));
    let sieve = Sieve::new(300).unwrap();
    for n in (1..=300).step_by(7).chain([299, 300]) {
        let stream: Vec<_> = farey_stream(order(n)).collect();
        for &alpha in &grid {
            let below = stream.partition_point(|&x| x < alpha) as u64;
            let brute = below.saturating_sub(1);
            assert_eq!(sieve.rank(order(n), alpha), brute, "n = {n}, α = {alpha}");
        }
    }
}

#[test]
fn witnesses_sit_where_claimed_except_seven() {
    for n in 4..=400 {
        let check = witness_check(order(n)).unwrap();
        assert_eq!(check.passed(), n != 7, "n = {n}: {check:?}");
    }
}

#[test]
fn f_never_exceeds_upper_bound() {
    for n in 4..=500 {
        let r = f_of_n(order(n)).unwrap();
        assert!(r.f <= upper_bound(n));
        assert!(r.witness.is_valid());
        assert_eq!(r.witness.distance(), r.f + 1);
    }
}

#[test]
fn minimal_pairs_satisfy_local_density() {
    for n in 4..=300 {
        let r = f_of_n(order(n)).unwrap();
        let check = local_density(order(n), &r.witness).unwrap();
        assert!(check.holds(), "n = {n}: {check:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn stream_pairs_are_neighbors(n in 1u64..2000) {
        let mut stream = farey_stream(order(n));
        let mut prev = stream.next().unwrap();
        for cur in stream {
            prop_assert!(are_farey_neighbors(prev, cur, order(n)).unwrap());
            prev = cur;
        }
    }

    #[test]
    fn radius_is_sound_for_larger_orders(b in 2u64..12, a_seed in 1u64..100, n in 200u64..700) {
        let a = (1..b).cycle().skip(a_seed as usize).find(|&a| Fraction::new(a, b).unwrap().den() == b).unwrap();
        let center = Fraction::new(a, b).unwrap();
        prop_assume!(n >= 5 * b - 1);
        let stream: Vec<_> = farey_stream(order(n)).collect();
        let i = stream.binary_search(&center).unwrap();
        let r = similar_order_radius(center, order(n)).to_integer() as usize;
        for k in i.saturating_sub(r)..=i {
            for l in i.max(k + 1)..stream.len().min(k + r + 1) {
                prop_assert!(similarly_ordered(stream[k], stream[l]));
            }
        }
    }
}
