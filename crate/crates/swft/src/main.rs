use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use swft::{config::RunConfig, meshio, report, Error};
use swft_core::mesh::validate_mesh;

#[derive(Parser)]
#[command(name = "swft", version, about = "Shallow water flow with a density-coupled solute on triangular meshes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a configuration and write snapshots to its output directory.
    Run {
        config: PathBuf,
        /// Suppress the summary.
        #[arg(short, long)]
        quiet: bool,
    },
    /// Run a sloped steady-flow configuration and print its error table.
    SteadyError { config: PathBuf },
    /// Check mesh geometry and boundary tags.
    ValidateMesh(MeshSource),
    /// Print the fully resolved configuration.
    DumpConfig { config: PathBuf },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct MeshSource {
    /// Mesh text file.
    mesh: Option<PathBuf>,
    /// Configuration whose mesh is built and tagged.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Run { config, quiet } => {
            let cfg = RunConfig::from_file(&config)?;
            let done = swft::execute(&cfg)?;
            if !quiet {
                let first = &done.output.history[0];
                let last = done.output.history.last().unwrap_or(first);
                println!("cells      {}", done.setup.mesh.num_cells());
                println!("steps      {}", done.output.final_state.steps);
                println!("t          {}", done.output.final_state.t);
                println!("snapshots  {} in {}", done.snapshots, done.dir.display());
                println!("mass drift {:.3e}", (last.mass - first.mass) / first.mass);
                if first.solute != 0.0 {
                    println!("solute drift {:.3e}", (last.solute - first.solute) / first.solute);
                }
                if let Some(e) = &done.steady {
                    print!("{}", report::format_table(e));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::SteadyError { config } => {
            let cfg = RunConfig::from_file(&config)?;
            if cfg.steady.is_none() {
                return Err(Error::Config {
                    line: 0,
                    message: format!("scenario {} has no steady profile", cfg.scenario.as_str()),
                });
            }
            let done = swft::execute(&cfg)?;
            print!("{}", report::format_table(done.steady.as_ref().expect("steady profile")));
            Ok(ExitCode::SUCCESS)
        }
        Command::ValidateMesh(source) => {
            let (mesh, tagged) = match (source.mesh, source.config) {
                (Some(path), _) => (meshio::read_mesh(&path)?, false),
                (None, Some(path)) => (RunConfig::from_file(&path)?.scenario()?.build_mesh()?, true),
                (None, None) => unreachable!("clap enforces one source"),
            };
            let r = validate_mesh(&mesh);
            println!("cells                {}", r.cells);
            println!("vertices             {}", r.vertices);
            println!("wall edges           {}", r.wall_edges);
            println!("outflow edges        {}", r.outflow_edges);
            println!("untagged edges       {}", r.untagged_edges);
            println!("area range           {:.6e} {:.6e}", r.min_area, r.max_area);
            println!("min height           {:.6e}", r.min_height);
            println!("identity residual    {:.3e}", r.max_relative_identity_residual);
            println!("negative-area cells  {}", r.negative_area_cells);
            let ok = r.negative_area_cells == 0
                && r.max_relative_identity_residual <= 1e-12
                && (!tagged || r.untagged_edges == 0);
            println!("{}", if ok { "valid" } else { "invalid" });
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::DumpConfig { config } => {
            print!("{}", RunConfig::from_file(&config)?.dump());
            Ok(ExitCode::SUCCESS)
        }
    }
}
