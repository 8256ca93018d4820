mod args;
mod input;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use spectral_forge::blockforge::{assemble, chain, fiedler2, AssembledSystem, BlockSystem};
use spectral_forge::dstoch::{join, DsJoinMode, DsJoinSpec};
use spectral_forge::graphspec::{
    chain_join, complete_multipartite, energy, join_all, join_isomorphic_copies_seeded, JoinResult,
};
use spectral_forge::nonneg::{circulant_realize, NonnegBlock};
use spectral_forge::verify::{audit, Construction};
use spectral_forge::{DenseMatrix, Tolerances};

use args::{Cli, Command, Common};
use input::{DsFile, MatrixFile, SpectrumFile, SystemFile};
use output::Artifact;

const TOL_ENV: &str = "SPECTRAL_FORGE_TOL";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] spectral_forge::Error),
}

fn tolerances(common: &Common) -> Result<Tolerances, CliError> {
    let tol = match (common.tol, std::env::var(TOL_ENV)) {
        (Some(t), _) => t,
        (None, Ok(s)) => s
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("{TOL_ENV}={s:?} is not a number")))?,
        (None, Err(_)) => Tolerances::default().spectrum_match,
    };
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(CliError::Input(format!("tolerance {tol} must be positive")));
    }
    Ok(Tolerances {
        spectrum_match: tol,
        ..Tolerances::default()
    })
}

fn load_system(path: &std::path::Path) -> Result<(SystemFile, Vec<input::Block>), CliError> {
    let file: SystemFile = input::read_json(path)?;
    if file.blocks.is_empty() {
        return Err(CliError::Input("blocks must not be empty".into()));
    }
    let blocks = file
        .blocks
        .iter()
        .enumerate()
        .map(|(i, b)| input::block(i, b))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((file, blocks))
}

fn block_system(file: &SystemFile, blocks: Vec<input::Block>) -> Result<BlockSystem, CliError> {
    let rho = file
        .rho
        .as_ref()
        .ok_or_else(|| CliError::Input("rho is required".into()))?;
    let rho = input::matrix("rho", rho)?;
    let pairs = blocks
        .iter()
        .zip(&file.blocks)
        .enumerate()
        .map(|(i, (b, spec))| b.pair(i, spec))
        .collect::<Result<Vec<_>, _>>()?;
    let (mats, spectra) = blocks.into_iter().map(|b| (b.matrix, b.spectrum)).unzip();
    Ok(BlockSystem::new(mats, pairs, spectra, rho)?)
}

fn blocks_artifact(
    command: &'static str,
    sys: &BlockSystem,
    a: AssembledSystem,
    tol: &Tolerances,
) -> Artifact {
    let report = audit(command, Construction::Blocks(sys), &a.big, &a.predicted, tol);
    Artifact {
        command,
        spectrum: a.predicted,
        small: Some(a.small),
        matrix: Some(a.big),
        energy: None,
        audit: Some(report),
    }
}

fn join_artifact(command: &'static str, res: JoinResult, tol: &Tolerances) -> Artifact {
    let report = audit(
        command,
        Construction::GraphJoin(&res),
        res.joined.adjacency(),
        &res.predicted,
        tol,
    );
    Artifact {
        command,
        energy: Some(res.energy),
        spectrum: res.predicted,
        small: Some(res.small),
        matrix: Some(res.joined.adjacency().clone()),
        audit: Some(report),
    }
}

fn ds(
    command: &'static str,
    path: &std::path::Path,
    alpha: f64,
    rho: f64,
    mode: DsJoinMode,
    tol: &Tolerances,
) -> Result<Artifact, CliError> {
    let file: DsFile = input::read_json(path)?;
    let t1 = input::matrix("t1", &file.t1)?;
    let t2 = input::matrix("t2", &file.t2)?;
    let s1 = input::spectrum_or_jacobi("spec1", &t1, file.spec1.as_deref())?;
    let s2 = input::spectrum_or_jacobi("spec2", &t2, file.spec2.as_deref())?;
    let spec = DsJoinSpec::new(t1, t2, s1, s2, alpha, rho)?;
    let d = join(&spec, mode)?;
    let report = audit(command, Construction::DsJoin { spec: &spec, mode }, &d.matrix, &d.predicted, tol);
    Ok(Artifact {
        command,
        spectrum: d.predicted,
        small: None,
        matrix: Some(d.matrix),
        energy: None,
        audit: Some(report),
    })
}

fn execute(command: &Command, common: &Common) -> Result<Artifact, CliError> {
    let tol = tolerances(common)?;
    match command {
        Command::Assemble { input } => {
            let (file, blocks) = load_system(input)?;
            let sys = block_system(&file, blocks)?;
            let a = assemble(&sys)?;
            Ok(blocks_artifact("assemble", &sys, a, &tol))
        }
        Command::Chain { input } => {
            let (file, blocks) = load_system(input)?;
            let sys = block_system(&file, blocks)?;
            let a = chain(&sys)?;
            Ok(blocks_artifact("chain", &sys, a, &tol))
        }
        Command::Fiedler { input, rho, rho11, rho22 } => {
            let (file, blocks) = load_system(input)?;
            if blocks.len() != 2 {
                return Err(CliError::Input(format!("fiedler needs exactly 2 blocks, got {}", blocks.len())));
            }
            let u = blocks[0].pair(0, &file.blocks[0])?;
            let v = blocks[1].pair(1, &file.blocks[1])?;
            let (a, b) = (&blocks[0], &blocks[1]);
            let out = fiedler2(&a.matrix, &a.spectrum, &u, &b.matrix, &b.spectrum, &v, *rho, *rho11, *rho22)?;
            let sys = BlockSystem::new(
                vec![a.matrix.clone(), b.matrix.clone()],
                vec![u, v],
                vec![a.spectrum.clone(), b.spectrum.clone()],
                DenseMatrix::from_rows(&[[*rho11, *rho], [*rho, *rho22]])?,
            )?;
            Ok(blocks_artifact("fiedler", &sys, out, &tol))
        }
        Command::Circulant { input, rho } => {
            let (file, blocks) = load_system(input)?;
            let first_row = match (rho, &file.rho) {
                (Some(r), _) => r.clone(),
                (None, Some(m)) if !m.is_empty() => m[0].clone(),
                _ => return Err(CliError::Input("circulant needs --rho or a rho matrix in the input".into())),
            };
            let nb: Vec<NonnegBlock> = blocks
                .into_iter()
                .map(|b| {
                    let nb = NonnegBlock::new(b.matrix, b.spectrum);
                    match b.given_pair {
                        Some(p) => nb.with_perron(p),
                        None => nb,
                    }
                })
                .collect();
            let out = circulant_realize(&nb, &first_row)?;
            let report = audit(
                "circulant",
                Construction::Blocks(&out.system),
                &out.assembled.big,
                &out.realized,
                &tol,
            );
            Ok(Artifact {
                command: "circulant",
                spectrum: out.realized,
                small: Some(out.assembled.small),
                matrix: Some(out.assembled.big),
                energy: None,
                audit: Some(report),
            })
        }
        Command::DsJoin { input, alpha, rho } => ds("ds-join", input, *alpha, *rho, DsJoinMode::Scaled, &tol),
        Command::DsJoinAffine { input, alpha, rho } => {
            ds("ds-join-affine", input, *alpha, *rho, DsJoinMode::Affine, &tol)
        }
        Command::GraphJoin { graphs } => {
            let parts = graphs.iter().map(|p| input::read_graph(p)).collect::<Result<Vec<_>, _>>()?;
            Ok(join_artifact("graph-join", join_all(&parts)?, &tol))
        }
        Command::ChainJoin { graphs } => {
            let parts = graphs.iter().map(|p| input::read_graph(p)).collect::<Result<Vec<_>, _>>()?;
            Ok(join_artifact("chain-join", chain_join(&parts)?, &tol))
        }
        Command::Multipartite { sizes } => Ok(join_artifact("multipartite", complete_multipartite(sizes)?, &tol)),
        Command::IsoJoin { graph, k } => {
            let g = input::read_graph(graph)?;
            let spectrum = g.graph().spectrum()?;
            let res = join_isomorphic_copies_seeded(&g, &spectrum, *k, common.seed)?;
            Ok(join_artifact("iso-join", res, &tol))
        }
        Command::Verify { input } => {
            let file: MatrixFile = input::read_json(input)?;
            let m = input::matrix("matrix", &file.matrix)?;
            let s = input::spectrum("spectrum", &file.spectrum)?;
            let report = audit("verify", Construction::Matrix, &m, &s, &tol);
            Ok(Artifact {
                command: "verify",
                spectrum: s,
                small: None,
                matrix: Some(m),
                energy: None,
                audit: Some(report),
            })
        }
        Command::Energy { graph, input } => {
            let (spectrum, matrix) = match (graph, input) {
                (Some(g), _) => {
                    let g = spectral_forge::graphspec::Graph::parse_edge_list(
                        &std::fs::read_to_string(g).map_err(|e| CliError::Input(format!("{}: {e}", g.display())))?,
                    )
                    .map_err(|e| CliError::Input(format!("{}: {e}", g.display())))?;
                    (g.spectrum()?, Some(g.adjacency().clone()))
                }
                (None, Some(p)) => {
                    let file: SpectrumFile = input::read_json(p)?;
                    (input::spectrum("spectrum", &file.spectrum)?, None)
                }
                (None, None) => return Err(CliError::Input("energy needs --graph or --input".into())),
            };
            Ok(Artifact {
                command: "energy",
                energy: Some(energy(&spectrum)),
                spectrum,
                small: None,
                matrix,
                audit: None,
            })
        }
    }
}

fn emit(artifact: &Artifact, common: &Common) -> Result<(), CliError> {
    let text = output::render(artifact, common.format)?;
    match &common.output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Input(format!("stdout: {e}")))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let artifact = match execute(&cli.command, &cli.common).and_then(|a| emit(&a, &cli.common).map(|_| a)) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    if let Some(report) = &artifact.audit {
        if cli.common.verify {
            eprint!("{}", report.to_text());
        } else {
            eprint!("{}", output::audit_summary(report));
        }
        if !report.passed() {
            return ExitCode::from(2);
        }
    }
    if let Some(e) = artifact.energy {
        eprintln!("energy: {e}");
    }
    ExitCode::SUCCESS
}
