use expmarkov::approx::{self, ApproxParams, CoverGrowthParams, GridIndicator};
use expmarkov::orbit::{ChainSampler, ExactOrbit, SampledOrbit};
use expmarkov::rational::{int, ratio};
use expmarkov::{Error, GibbsModel, MarkovMap, Potential};

fn params(kappa: f64, start: u64, horizon: u64, resolution: u32) -> ApproxParams {
    ApproxParams {
        kappa,
        start,
        horizon,
        resolution,
    }
}

#[test]
fn inclusion_examples() {
    let map = MarkovMap::doubling();
    assert!(approx::inclusion_check(&map, &ratio(1, 3), &params(1.0, 4, 256, 10)).unwrap().holds());
    assert!(approx::inclusion_check(&map, &int(0), &params(0.8, 2, 300, 10)).unwrap().holds());
}

#[test]
fn longer_horizon_gives_a_subset() {
    let map = MarkovMap::doubling();
    let x = ratio(5, 17);
    let short = approx::uniform_cover_exact(&map, &x, &params(1.2, 8, 200, 11)).unwrap();
    let long = approx::uniform_cover_exact(&map, &x, &params(1.2, 8, 201, 11)).unwrap();
    assert!(long.is_subset_of(&short));
}

#[test]
fn uniform_cover_lies_in_asymptotic_cover() {
    let map = MarkovMap::doubling();
    let model = GibbsModel::new(&map, &Potential::bernoulli(&map, &[0.7, 0.3]).unwrap()).unwrap();
    let sampler = ChainSampler::new(&model).unwrap();
    for s in 0..4 {
        let p = params(1.0 / 0.9, 16, 4096, 12);
        let u = approx::uniform_cover(&mut SampledOrbit::new(&map, &sampler, 2, s), &p).unwrap();
        let l = approx::asymptotic_cover(&mut SampledOrbit::new(&map, &sampler, 2, s), p.kappa, 1, p.horizon, 12).unwrap();
        assert!(u.is_subset_of(&l));
    }
    let full = approx::asymptotic_cover(&mut ExactOrbit::new(&map, ratio(1, 3)).unwrap(), 0.01, 1, 64, 8).unwrap();
    assert_eq!(full.count(), 256);
}

#[test]
fn box_fit_examples() {
    let full: Vec<GridIndicator> = (4..=8).map(GridIndicator::full).collect();
    assert!((approx::box_dimension_fit(&full).unwrap().slope - 1.0).abs() < 1e-12);
    let single: Vec<GridIndicator> = (4..=8)
        .map(|m| {
            let mut g = GridIndicator::empty(m);
            g.set(0, true);
            g
        })
        .collect();
    let fit = approx::box_dimension_fit(&single).unwrap();
    assert!(fit.slope.abs() < 1e-12 && fit.residual < 1e-12);
}

fn itinerary(model: &GibbsModel, len: usize, seed: u64) -> Vec<u16> {
    ChainSampler::new(model).unwrap().sample_word(len, seed, 0).into_inner()
}

#[test]
fn lebesgue_scale_set_is_empty() {
    let map = MarkovMap::doubling();
    let model = GibbsModel::new(&map, &Potential::neg_log_derivative(&map)).unwrap();
    let p = CoverGrowthParams::new(12, 1.5, 1.2, 1.0 / 1.1, 14);
    let x = itinerary(&model, (1 << 14) + 64, 1);
    let g = approx::cover_growth(&model, &x, &p).unwrap();
    assert!(g.levels.iter().all(|l| l.count == 0));
    assert!(g.recursion_holds);
}

#[test]
fn cover_growth_rejects_misordered_exponents() {
    let map = MarkovMap::doubling();
    let model = GibbsModel::new(&map, &Potential::neg_log_derivative(&map)).unwrap();
    let x = itinerary(&model, 1 << 12, 1);
    let p = CoverGrowthParams::new(10, 1.0, 1.2, 1.0 / 0.7, 11);
    assert!(matches!(approx::cover_growth(&model, &x, &p), Err(Error::ParameterOrder(_))));
}

#[test]
fn bernoulli_cover_growth_report() {
    let map = MarkovMap::doubling();
    let model = GibbsModel::new(&map, &Potential::bernoulli(&map, &[0.7, 0.3]).unwrap()).unwrap();
    let p = CoverGrowthParams::new(16, 1.0, 0.85, 1.0 / 0.7, 20);
    let x = itinerary(&model, (1 << 20) + 64, 3);
    let g = approx::cover_growth(&model, &x, &p).unwrap();
    println!("n = {}, gamma = {}, epsilon = {:e}", g.n, g.gamma, g.epsilon);
    for l in &g.levels {
        println!("{l:?}");
    }
    println!("ratios {:?}", g.growth_ratios());
    assert!(g.recursion_holds);
    assert_eq!(g.levels.len(), 5);
    assert!((g.gamma - 1.0).abs() < 1e-12);
    let last = *g.growth_ratios().last().unwrap();
    assert!(last < 1.0 + g.epsilon, "ratio {last} vs 1 + {}", g.epsilon);
}
