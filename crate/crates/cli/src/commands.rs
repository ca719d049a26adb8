use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use expmarkov::approx::{self, ApproxParams};
use expmarkov::config;
use expmarkov::csvout::{self, float, CoverRow, Table};
use expmarkov::dynamics::{self, HittingParams};
use expmarkov::multifractal::{default_q_grid, Multifractal};
use expmarkov::orbit::{ChainSampler, SampledOrbit};
use expmarkov::parallel::{self, Execution};
use expmarkov::rational::display;
use expmarkov::thermo::{self, GibbsModel, Potential};
use expmarkov::verify::{self, Status, VerifyOptions};
use expmarkov::MarkovMap;

use crate::{Cli, Command, CoverMode, Failure, ModelArgs};

pub fn run(cli: &Cli) -> Result<(), Failure> {
    let mode = match cli.workers {
        Some(0) => return Err(Failure::Usage("--workers must be at least 1".into())),
        Some(1) => Execution::Sequential,
        Some(n) => {
            parallel::set_workers(n);
            Execution::Parallel
        }
        None => Execution::Parallel,
    };
    parallel::with_execution(mode, || dispatch(cli))
}

fn dispatch(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::ValidateMap { map } => {
            let map = config::load_map(map)?;
            emit(cli, &map_summary(&map))
        }
        Command::Pressure(args) => {
            let (map, phi) = load_model(args)?;
            let mut t = Table::new(["pressure"]);
            t.push(vec![float(thermo::pressure(&map, &phi)?)]);
            emit(cli, &t)
        }
        Command::GibbsCheck { model, n_max, max_lag } => {
            let (map, phi) = load_model(model)?;
            emit(cli, &gibbs_check(&map, &phi, *n_max, *max_lag)?)
        }
        Command::Spectrum { model, q_grid } => {
            let (map, phi) = load_model(model)?;
            let grid = match q_grid {
                Some(text) => parse_grid(text)?,
                None => default_q_grid(),
            };
            let points = Multifractal::new(&map, &phi)?.spectrum(&grid)?;
            emit(cli, &csvout::spectrum_table(&points))
        }
        Command::Critical(args) => {
            let (map, phi) = load_model(args)?;
            let c = Multifractal::new(&map, &phi)?.critical_exponents()?;
            emit(cli, &csvout::critical_table(&c))
        }
        Command::Hitting {
            map,
            potential_x,
            potential_y,
            trials,
            jmax,
            nmax,
        } => {
            let seed = require_seed(cli)?;
            let map = config::load_map(map)?;
            let phi = config::load_potential(potential_x, &map)?;
            let psi = config::load_potential(potential_y, &map)?;
            let params = HittingParams {
                trials: *trials,
                j_max: *jmax,
                n_max: *nmax,
                seed,
            };
            let summary = dynamics::hitting_law_from_potentials(&map, &phi, &psi, params)?;
            emit(cli, &csvout::hitting_table(&summary))
        }
        Command::Cover {
            model,
            kappa,
            i,
            horizon,
            resolution,
            mode,
            samples,
        } => {
            let seed = require_seed(cli)?;
            let (map, phi) = load_model(model)?;
            let gibbs = GibbsModel::new(&map, &phi)?;
            let params = ApproxParams {
                kappa: *kappa,
                start: *i,
                horizon: *horizon,
                resolution: *resolution,
            };
            let rows = cover_rows(&gibbs, &params, *mode, *samples, seed)?;
            emit(cli, &csvout::cover_table(&rows))
        }
        Command::Verify => run_verify(cli),
    }
}

fn load_model(args: &ModelArgs) -> Result<(MarkovMap, Potential), Failure> {
    let map = config::load_map(&args.map)?;
    let phi = config::load_potential(&args.potential, &map)?;
    Ok((map, phi))
}

fn require_seed(cli: &Cli) -> Result<u64, Failure> {
    cli.seed
        .ok_or_else(|| Failure::Usage("this subcommand is stochastic and needs --seed".into()))
}

fn emit(cli: &Cli, table: &Table) -> Result<(), Failure> {
    write_out(cli.out.as_deref(), |w| table.write_to(w).map_err(Failure::from))
}

fn write_out(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> Result<(), Failure>) -> Result<(), Failure> {
    let io_err = |e: io::Error| Failure::Usage(format!("cannot write output: {e}"));
    match path {
        Some(p) => {
            let mut file = File::create(p).map_err(io_err)?;
            f(&mut file)?;
            file.flush().map_err(io_err)
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            f(&mut lock)?;
            lock.flush().map_err(io_err)
        }
    }
}

fn map_summary(map: &MarkovMap) -> Table {
    let mut t = Table::new(["quantity", "value"]);
    let mut row = |k: &str, v: String| t.push(vec![k.to_string(), v]);
    row("symbols", map.symbols().to_string());
    row("primitivity_exponent", map.primitivity_exponent().to_string());
    row("min_expansion", display(&map.min_expansion()));
    row("max_expansion", display(&map.max_expansion()));
    row("distortion_constant", display(&map.distortion_constant()));
    for n in 1..=5 {
        row(&format!("words_{n}"), map.count_words(n).to_string());
    }
    t
}

fn gibbs_check(map: &MarkovMap, phi: &Potential, n_max: usize, max_lag: usize) -> Result<Table, Failure> {
    let model = GibbsModel::new(map, phi)?;
    let gamma = thermo::gibbs_constant(&model, n_max)?;
    let qb = thermo::quasi_bernoulli_check(&model, n_max)?;
    let len = model.depth();
    let lags: Vec<usize> = (len..=max_lag.max(len)).collect();
    let mix = thermo::mixing_report(&model, &lags, &thermo::default_sample_cylinders(&model, len)?)?;
    let opt = |v: Option<f64>| v.map(float).unwrap_or_default();
    let mut t = Table::new(["quantity", "value"]);
    let mut row = |k: &str, v: String| t.push(vec![k.to_string(), v]);
    row("pressure", float(model.pressure()));
    row("gamma", float(gamma));
    row("quasi_bernoulli_worst_ratio", float(qb.worst_ratio));
    row("quasi_bernoulli_bound", float(qb.gamma.powi(3)));
    row("quasi_bernoulli_holds", qb.holds.to_string());
    row("mixing_beta", opt(mix.beta));
    row("mixing_constant", opt(mix.constant));
    row("predicted_beta", float(mix.predicted_beta));
    Ok(t)
}

fn parse_grid(text: &str) -> Result<Vec<f64>, Failure> {
    let bad = || Failure::Usage(format!("invalid q grid {text:?}"));
    let num = |s: &str| s.trim().parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(bad);
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [start, stop, step] => {
            let (a, b, h) = (num(start)?, num(stop)?, num(step)?);
            if h <= 0.0 || b < a {
                return Err(bad());
            }
            let n = ((b - a) / h + 1e-9).floor() as usize;
            Ok((0..=n).map(|k| a + h * k as f64).collect())
        }
        [list] => list.split(',').map(num).collect(),
        _ => Err(bad()),
    }
}

fn cover_rows(model: &GibbsModel, params: &ApproxParams, mode: CoverMode, samples: u64, seed: u64) -> Result<Vec<CoverRow>, Failure> {
    let sampler = ChainSampler::new(model)?;
    let rows = parallel::try_map_indexed(samples as usize, |s| {
        let mut orbit = SampledOrbit::new(model.map(), &sampler, seed, s as u64);
        let grid = match mode {
            CoverMode::Uniform => approx::uniform_cover(&mut orbit, params)?,
            CoverMode::Complement => approx::uniform_cover(&mut orbit, params)?.complement(),
            CoverMode::Asymptotic => {
                approx::asymptotic_cover(&mut orbit, params.kappa, params.start, params.horizon, params.resolution)?
            }
        };
        Ok::<_, expmarkov::Error>(CoverRow {
            x_id: s as u64,
            kappa: params.kappa,
            m: params.resolution,
            horizon: params.horizon,
            fraction: approx::lebesgue_fraction(&grid),
            boxcount: grid.count(),
        })
    })?;
    Ok(rows)
}

fn run_verify(cli: &Cli) -> Result<(), Failure> {
    let options = VerifyOptions {
        seed: cli.seed.unwrap_or(VerifyOptions::default().seed),
        ..VerifyOptions::default()
    };
    let mut table = Table::new(["criterion", "status", "elapsed_s", "check", "passed", "detail"]);
    let mut failed = false;
    for criterion in verify::CRITERIA {
        let report = criterion(&options);
        print!("{report}");
        failed |= report.status == Status::Fail;
        for c in &report.checks {
            table.push(vec![
                report.id.to_string(),
                report.status.to_string(),
                format!("{:.3}", report.elapsed.as_secs_f64()),
                c.name.clone(),
                c.passed.to_string(),
                c.detail.clone(),
            ]);
        }
    }
    if let Some(path) = &cli.out {
        write_out(Some(path), |w| table.write_to(w).map_err(Failure::from))?;
    }
    if failed {
        Err(Failure::Acceptance)
    } else {
        Ok(())
    }
}
