use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use helix48::cli;
use helix48::image_codec::{ImageParams, PlanesKept, Step};
use helix48::oligo::DEFAULT_OLIGO_LEN;

#[derive(Parser)]
#[command(
    name = "helix48",
    version,
    about = "Constrained base-48 arithmetic coding of files and images into DNA oligos"
)]
struct Args {
    /// Oligo length in nucleotides.
    #[arg(long, global = true, default_value_t = DEFAULT_OLIGO_LEN)]
    oligo_len: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode an arbitrary file into a FASTA oligo pool.
    EncodeFile {
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decode a FASTA oligo pool back into the original file.
    DecodeFile {
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Encode an 8-bit binary PGM image.
    EncodeImage {
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Quantizer step, `n` or `n/d`.
        #[arg(long, default_value = "1")]
        step: Step,
        #[arg(long, default_value_t = 3)]
        levels: u8,
        /// Number of most significant bit planes to code, or `all`.
        #[arg(long, default_value = "all")]
        planes_kept: PlanesKept,
    },
    /// Decode a FASTA oligo pool into a PGM image.
    DecodeImage {
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Report GC content, homopolymer runs and lengths of a FASTA pool.
    Stats { input: PathBuf },
    /// Rate-distortion sweep over every combination of the given steps and
    /// truncations.
    RdSweep {
        input: PathBuf,
        #[arg(long)]
        csv: PathBuf,
        #[arg(long = "step")]
        steps: Vec<Step>,
        #[arg(long = "planes-kept")]
        planes_kept: Vec<PlanesKept>,
        #[arg(long, default_value_t = 3)]
        levels: u8,
    },
}

fn run(args: Args) -> helix48::Result<bool> {
    match args.command {
        Command::EncodeFile { input, out } => {
            println!("{}", cli::cmd_encode_file(&input, &out, args.oligo_len)?);
        }
        Command::DecodeFile { input, out } => {
            let n = cli::cmd_decode_file(&input, &out)?;
            println!("decoded {n} bytes to {}", out.display());
        }
        Command::EncodeImage {
            input,
            out,
            step,
            levels,
            planes_kept,
        } => {
            let params = ImageParams {
                step,
                levels,
                planes_kept,
            };
            println!(
                "{}",
                cli::cmd_encode_image(&input, &out, &params, args.oligo_len)?
            );
        }
        Command::DecodeImage { input, out } => {
            let img = cli::cmd_decode_image(&input, &out)?;
            println!(
                "decoded {}x{} image to {}",
                img.width,
                img.height,
                out.display()
            );
        }
        Command::Stats { input } => {
            let report = cli::cmd_stats(&input, args.oligo_len)?;
            println!("{report}");
            return Ok(report.is_clean());
        }
        Command::RdSweep {
            input,
            csv,
            steps,
            planes_kept,
            levels,
        } => {
            let kept = if planes_kept.is_empty() {
                vec![PlanesKept::All]
            } else {
                planes_kept
            };
            let grid: Vec<_> = steps
                .iter()
                .flat_map(|&s| kept.iter().map(move |&k| (s, k)))
                .collect();
            let points = cli::cmd_rd_sweep(&input, &csv, levels, &grid)?;
            print!("{}", cli::rd_csv(&points));
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: constraint violations found");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(cli::exit_code(&e) as u8)
        }
    }
}
