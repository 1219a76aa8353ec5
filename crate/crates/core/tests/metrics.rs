use num_rational::Rational64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smforge::metrics::*;
use smforge::presentation::GenKind;

fn delta() -> Rational64 {
    Rational64::new(1, 100)
}

/// Every factorization into letters and (θ,a)-syllables, minimized by recursion.
fn brute_length(k: &[GenKind], d: Rational64) -> Rational64 {
    if k.is_empty() {
        return Rational64::from_integer(0);
    }
    let one = |x: GenKind| if x == GenKind::A { d } else { Rational64::from_integer(1) };
    let mut best = one(k[0]) + brute_length(&k[1..], d);
    if k.len() >= 2 {
        let pair = [k[0], k[1]];
        let syllable = pair.contains(&GenKind::Theta) && pair.contains(&GenKind::A);
        if syllable {
            best = best.min(Rational64::from_integer(1) + brute_length(&k[2..], d));
        }
    }
    best
}

/// Four symbols: a q-letter, a θ-letter and two a-letters.
fn all_words(max_len: usize) -> Vec<Vec<GenKind>> {
    let symbols = [GenKind::Q, GenKind::Theta, GenKind::A, GenKind::A];
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &s in &symbols {
                let mut v: Vec<GenKind> = w.clone();
                v.push(s);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

#[test]
fn length_examples() {
    use GenKind::*;
    assert_eq!(modified_length(&[A], delta()), delta());
    assert_eq!(modified_length(&[Theta, A], delta()), Rational64::from_integer(1));
    assert_eq!(modified_length(&[Q, Theta, A, A], delta()), Rational64::from_integer(2) + delta());
    assert_eq!(modified_length(&[], delta()), Rational64::from_integer(0));
}

#[test]
fn length_matches_brute_force() {
    let words = all_words(6);
    assert_eq!(words.len(), (0..=6).map(|i| 4usize.pow(i)).sum::<usize>());
    for w in &words {
        assert_eq!(modified_length(w, delta()), brute_length(w, delta()), "{w:?}");
    }
}

fn kind() -> impl Strategy<Value = GenKind> {
    prop_oneof![Just(GenKind::Q), Just(GenKind::Theta), Just(GenKind::A)]
}

proptest! {
    #[test]
    fn length_lower_bound(k in proptest::collection::vec(prop_oneof![Just(GenKind::Theta), Just(GenKind::A)], 0..40)) {
        let c = k.iter().filter(|&&x| x == GenKind::Theta).count() as i64;
        let d = k.len() as i64 - c;
        let bound = Rational64::from_integer(c).max(Rational64::from_integer(c) + Rational64::from_integer(d - c) * delta());
        prop_assert!(modified_length(&k, delta()) >= bound);
    }

    #[test]
    fn length_is_almost_additive(s1 in proptest::collection::vec(kind(), 0..20), s2 in proptest::collection::vec(kind(), 0..20)) {
        let l1 = modified_length(&s1, delta());
        let l2 = modified_length(&s2, delta());
        let mut s = s1.clone();
        s.extend(&s2);
        let l = modified_length(&s, delta());
        prop_assert!(l1 + l2 - delta() <= l);
        prop_assert!(l <= l1 + l2);
    }

    #[test]
    fn q_band_sides(c in 0usize..20, mask in any::<u32>()) {
        // θ-letters, each optionally followed by one a-letter
        let mut k = Vec::new();
        for i in 0..c {
            k.push(GenKind::Theta);
            if mask >> i & 1 == 1 {
                k.push(GenKind::A);
            }
        }
        prop_assert_eq!(modified_length(&k, delta()), Rational64::from_integer(c as i64));
    }
}

/// `#P_j` straight from the definition.
fn brute_pairs(n: &Necklace, j: usize) -> usize {
    let len = n.0.len();
    let mut count = 0;
    for o1 in 0..len {
        for o2 in 0..len {
            if o1 == o2 || n.0[o1] != Bead::White || n.0[o2] != Bead::White {
                continue;
            }
            let mut blacks = 0;
            let mut i = (o1 + 1) % len;
            while i != o2 {
                if n.0[i] == Bead::Black {
                    blacks += 1;
                }
                i = (i + 1) % len;
            }
            if blacks >= j {
                count += 1;
            }
        }
    }
    count
}

fn brute_mixture(n: &Necklace, big_j: usize) -> usize {
    (1..=big_j).map(|j| brute_pairs(n, j)).sum()
}

fn random_necklace(rng: &mut ChaCha8Rng) -> Necklace {
    let x = rng.gen_range(0..=8);
    let y = rng.gen_range(0..=8);
    let mut beads = vec![Bead::White; x];
    beads.extend(vec![Bead::Black; y]);
    for i in (1..beads.len()).rev() {
        let j = rng.gen_range(0..=i);
        beads.swap(i, j);
    }
    Necklace(beads)
}

fn positions(n: &Necklace, b: Bead) -> Vec<usize> {
    (0..n.0.len()).filter(|&i| n.0[i] == b).collect()
}

/// Beads of colour `b` strictly inside the counterclockwise arc `from -> to`.
fn on_arc(n: &Necklace, from: usize, to: usize, b: Bead) -> usize {
    let len = n.0.len();
    let mut i = (from + 1) % len;
    let mut c = 0;
    while i != to {
        if n.0[i] == b {
            c += 1;
        }
        i = (i + 1) % len;
    }
    c
}

#[test]
fn mixture_examples() {
    use Bead::*;
    assert_eq!(Necklace(vec![Black, Black]).mixture(3), 0);
    assert_eq!(Necklace(vec![White, White, Black]).mixture(2), 1);
    assert_eq!(Necklace::default().mixture(2), 0);
}

#[test]
fn mixture_lemma_on_random_necklaces() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut property_four = 0;
    for _ in 0..1000 {
        let o = random_necklace(&mut rng);
        let big_j = rng.gen_range(1..=4);
        let (x, y) = (o.whites(), o.blacks());
        let mu = o.mixture(big_j);
        assert_eq!(mu, brute_mixture(&o, big_j));
        for j in 1..=big_j {
            assert_eq!(o.pairs(j), brute_pairs(&o, j));
        }
        // (1)
        assert!(mu <= big_j * x * x);
        for k in 0..o.0.len() {
            assert_eq!(o.rotated(k).mixture(big_j), mu);
        }
        // (2)
        for w in positions(&o, Bead::White) {
            let o2 = o.without(w);
            for j in 1..=big_j {
                let (p, p2) = (brute_pairs(&o, j) as i64, brute_pairs(&o2, j) as i64);
                assert!(p - 2 * (x as i64) < p2 && p2 <= p);
            }
            let mu2 = o2.mixture(big_j) as i64;
            assert!(mu as i64 - 2 * (big_j * x) as i64 <= mu2 - 1 && mu2 <= mu as i64);
        }
        // (3)
        for b in positions(&o, Bead::Black) {
            let o2 = o.without(b);
            for j in 1..=big_j {
                assert!(brute_pairs(&o2, j) <= brute_pairs(&o, j));
            }
            assert!(o2.mixture(big_j) <= mu);
        }
        // (4)
        if y >= 3 {
            let blacks = positions(&o, Bead::Black);
            for i1 in 0..y {
                for step2 in 1..y {
                    for step3 in step2 + 1..y {
                        let (v1, v2, v3) = (blacks[i1], blacks[(i1 + step2) % y], blacks[(i1 + step3) % y]);
                        if on_arc(&o, v1, v3, Bead::Black) > big_j {
                            continue;
                        }
                        let y1 = on_arc(&o, v1, v2, Bead::White);
                        let y2 = on_arc(&o, v2, v3, Bead::White);
                        let mu2 = o.without(v2).mixture(big_j);
                        assert!(mu2 + y1 * y2 <= mu, "{o:?} J={big_j} v=({v1},{v2},{v3})");
                        property_four += 1;
                    }
                }
            }
        }
    }
    assert!(property_four > 1000);
}

#[test]
fn params_are_validated() {
    assert!(MetricParams::new(Rational64::new(1, 2), Rational64::from_integer(3), 2).is_ok());
    assert!(MetricParams::new(Rational64::from_integer(1), Rational64::from_integer(3), 2).is_err());
    assert!(MetricParams::new(Rational64::new(1, 2), Rational64::from_integer(0), 2).is_err());
    assert_eq!(MetricParams::default().delta, Rational64::new(1, 100));
}
