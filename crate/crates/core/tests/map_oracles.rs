use expmarkov::rational::{int, ratio};
use expmarkov::MarkovMap;
use nalgebra::DMatrix;

fn adjacency(map: &MarkovMap) -> DMatrix<u64> {
    let q = map.symbols();
    DMatrix::from_fn(q, q, |i, j| map.admissibility()[i][j] as u64)
}

#[test]
fn word_counts_are_sums_of_adjacency_powers() {
    let map = MarkovMap::three_symbol_restricted();
    let a = adjacency(&map);
    let mut power = DMatrix::<u64>::identity(3, 3);
    for n in 1..=14 {
        assert_eq!(map.count_words(n), power.sum() as u128, "n = {n}");
        if n <= 8 {
            assert_eq!(map.admissible_words(n).unwrap().len() as u64, power.sum());
        }
        power = &power * &a;
    }
    assert_eq!(map.count_words(5), 164);
}

#[test]
fn restricted_map_primitivity_exponent_is_first_positive_power() {
    let map = MarkovMap::three_symbol_restricted();
    let a = adjacency(&map);
    let mut power = a.clone();
    let mut r = 1;
    while power.iter().any(|&e| e == 0) {
        power = &power * &a;
        r += 1;
    }
    assert_eq!(map.primitivity_exponent(), r);
}

#[test]
fn cylinders_tile_the_interval_exactly() {
    for map in [MarkovMap::doubling(), MarkovMap::three_symbol_restricted()] {
        for n in 1..=7 {
            let cyl = map.enumerate_cylinders(n).unwrap();
            let total = cyl.iter().fold(int(0), |acc, c| acc + c.length());
            assert_eq!(total, int(1));
            assert_eq!(cyl[0].left, int(0));
            assert!(cyl.windows(2).all(|w| w[0].right == w[1].left));
        }
    }
}

#[test]
fn one_third_has_alternating_binary_itinerary() {
    let map = MarkovMap::doubling();
    assert_eq!(map.locate(&ratio(1, 3), 4).symbols(), &[0, 1, 0, 1]);
    assert_eq!(map.locate(&int(0), 6).symbols(), &[0; 6]);
    assert_eq!(map.locate(&ratio(1, 2), 1).symbols(), &[1]);
}
