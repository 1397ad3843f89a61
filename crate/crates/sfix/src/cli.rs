//! The `sfix` command line.
//!
//! Exit status: 0 on success, 1 on runtime failure, 2 on usage errors.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::error;
use sfix_core::{EncoderConfig, EncoderMode, FrameGeometry};

use crate::bench::run_benchmark;
use crate::container::{decode_container, encode_container};
use crate::error::Result;
use crate::ingest::{
    gen_low_motion, read_y4m, FillMode, Fps, FrameSink, RawReader, RawSink, SynthParams,
    VideoSource, Y4mSink, Y4mWriter,
};
use crate::net::{receive, ServeOptions, Server, DEFAULT_QUEUE_DEPTH};

#[derive(Debug, Parser)]
#[command(
    name = "sfix",
    version,
    about = "Lossless spatio-temporal frame indexing codec"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Encode a Y4M or raw video into an .sfix container
    Encode {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[command(flatten)]
        codec: CodecArgs,
        #[command(flatten)]
        raw: RawArgs,
    },
    /// Decode an .sfix container back to Y4M (or raw samples)
    Decode {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Write headerless samples even if the output ends in .y4m
        #[arg(long = "raw-output")]
        raw_output: bool,
    },
    /// Stream a video to TCP clients
    Serve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "127.0.0.1:7878")]
        listen: String,
        /// Override the source frame rate (N or N/D)
        #[arg(long)]
        fps: Option<Fps>,
        /// Hold the first frame until this many clients are connected
        #[arg(long = "wait-clients", default_value_t = 0)]
        wait_clients: usize,
        /// Per-client outbound queue length; a full queue disconnects the client
        #[arg(long = "queue-depth", default_value_t = DEFAULT_QUEUE_DEPTH as u16, value_parser = clap::value_parser!(u16).range(1..))]
        queue_depth: u16,
        #[command(flatten)]
        codec: CodecArgs,
        #[command(flatten)]
        raw: RawArgs,
    },
    /// Receive a stream and write the reconstructed video
    Recv {
        #[arg(long)]
        connect: String,
        #[arg(long)]
        output: PathBuf,
        /// Per-frame CSV metrics for received deltas
        #[arg(long)]
        metrics: Option<PathBuf>,
        #[arg(long = "raw-output")]
        raw_output: bool,
    },
    /// Measure buffer size, compression ratio and build time per frame
    Bench {
        #[arg(long)]
        input: PathBuf,
        /// Measure both the spatio-temporal and the baseline encoder
        #[arg(long)]
        compare: bool,
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        codec: CodecArgs,
        #[command(flatten)]
        raw: RawArgs,
    },
    /// Generate a synthetic low-motion mono Y4M video
    Gen {
        #[arg(long)]
        output: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        frames: u32,
        #[arg(long, default_value_t = 64)]
        width: u32,
        #[arg(long, default_value_t = 64)]
        height: u32,
        #[arg(long, default_value = "25")]
        fps: Fps,
        /// Blocks repainted per frame (capped by --change-fraction)
        #[arg(long, default_value_t = 8)]
        blocks: u32,
        #[arg(long = "block-size", default_value_t = 8)]
        block_size: u32,
        #[arg(long, value_enum, default_value_t = Fill::Constant)]
        fill: Fill,
        #[arg(long = "change-fraction", default_value_t = 0.05)]
        change_fraction: f64,
    },
}

#[derive(Debug, Args)]
pub struct CodecArgs {
    /// Use the temporal-only baseline encoder
    #[arg(long)]
    baseline: bool,
    /// Shortest run of one repeated changed value that is collapsed
    #[arg(long = "min-run", default_value_t = EncoderConfig::DEFAULT_MIN_REPEAT_RUN, value_parser = clap::value_parser!(u32).range(2..))]
    min_run: u32,
}

impl CodecArgs {
    fn mode(&self) -> EncoderMode {
        if self.baseline {
            EncoderMode::StandardBaseline
        } else {
            EncoderMode::SpatioTemporal
        }
    }

    fn config(&self) -> Result<EncoderConfig> {
        Ok(EncoderConfig::new(self.mode(), self.min_run)?)
    }
}

/// Geometry of a headerless input; when `--width` is absent the input is
/// read as Y4M.
#[derive(Debug, Args)]
pub struct RawArgs {
    #[arg(long, requires = "height")]
    width: Option<u32>,
    #[arg(long, requires = "width")]
    height: Option<u32>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=3))]
    channels: u8,
    /// Frame rate of a raw input
    #[arg(long = "raw-fps", default_value = "25")]
    raw_fps: Fps,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Fill {
    Constant,
    Noise,
}

fn open_source(input: &Path, raw: &RawArgs) -> Result<Box<dyn VideoSource>> {
    let file = BufReader::new(File::open(input)?);
    Ok(match (raw.width, raw.height) {
        (Some(w), Some(h)) => {
            let g = FrameGeometry::new(w, h, raw.channels)?;
            Box::new(RawReader::new(file, g, raw.raw_fps))
        }
        _ => Box::new(read_y4m(file)?),
    })
}

fn open_sink(output: &Path, raw_output: bool) -> Result<Box<dyn FrameSink>> {
    let file = BufWriter::new(File::create(output)?);
    let y4m = !raw_output
        && output
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("y4m"));
    Ok(if y4m {
        Box::new(Y4mSink::new(file))
    } else {
        Box::new(RawSink::new(file))
    })
}

/// Runs `f`; on failure removes the partially written `output`.
fn cleaning_up<T>(output: &Path, f: impl FnOnce() -> Result<T>) -> Result<T> {
    let r = f();
    if r.is_err() {
        let _ = std::fs::remove_file(output);
    }
    r
}

pub fn run(cli: Cli) -> Result<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Encode {
            input,
            output,
            codec,
            raw,
        } => {
            let mut source = open_source(&input, &raw)?;
            let config = codec.config()?;
            let summary = cleaning_up(&output, || {
                encode_container(&mut source, config, BufWriter::new(File::create(&output)?))
            })?;
            writeln!(
                out,
                "{}: frames={} wire_bytes={} mean_diff_pct={:.4}",
                output.display(),
                summary.frames,
                summary.wire_bytes,
                summary.mean_diff_pct
            )?;
        }
        Command::Decode {
            input,
            output,
            raw_output,
        } => {
            let summary = cleaning_up(&output, || {
                let mut sink = open_sink(&output, raw_output)?;
                decode_container(BufReader::new(File::open(&input)?), sink.as_mut())
            })?;
            writeln!(out, "{}: frames={}", output.display(), summary.frames)?;
        }
        Command::Serve {
            input,
            listen,
            fps,
            wait_clients,
            queue_depth,
            codec,
            raw,
        } => {
            let mut source = open_source(&input, &raw)?;
            let opts = ServeOptions {
                config: codec.config()?,
                fps_override: fps,
                queue_depth: queue_depth.into(),
                holds: Vec::new(),
            }
            .wait_for_clients(wait_clients);
            let server = Server::bind(&listen)?;
            writeln!(out, "listening on {}", server.local_addr()?)?;
            out.flush()?;
            let report = server.run(&mut source, &opts)?;
            writeln!(
                out,
                "frames={} deltas={} clients={} dropped={}",
                report.frames_encoded,
                report.deltas_serialized,
                report.clients_admitted,
                report.clients_dropped
            )?;
        }
        Command::Recv {
            connect,
            output,
            metrics,
            raw_output,
        } => {
            let report = cleaning_up(&output, || {
                let mut sink = open_sink(&output, raw_output)?;
                receive(&connect, sink.as_mut(), metrics.as_deref())
            })?;
            writeln!(
                out,
                "{}: frames={} first_frame={}",
                output.display(),
                report.frames,
                report
                    .first_frame_no
                    .map_or("-".to_string(), |n| n.to_string())
            )?;
        }
        Command::Bench {
            input,
            compare,
            report,
            codec,
            raw,
        } => {
            let mut source = open_source(&input, &raw)?;
            let modes = if compare {
                vec![EncoderMode::SpatioTemporal, EncoderMode::StandardBaseline]
            } else {
                vec![codec.mode()]
            };
            let summary = run_benchmark(&mut source, &modes, codec.min_run, report.as_deref())?;
            write!(out, "{summary}")?;
        }
        Command::Gen {
            output,
            seed,
            frames,
            width,
            height,
            fps,
            blocks,
            block_size,
            fill,
            change_fraction,
        } => {
            let params = SynthParams {
                geometry: FrameGeometry::new(width, height, 1)?,
                fps,
                seed,
                n_frames: frames,
                block_count: blocks,
                block_size,
                fill_mode: match fill {
                    Fill::Constant => FillMode::Constant,
                    Fill::Noise => FillMode::Noise,
                },
                change_fraction,
            };
            let mut source = gen_low_motion(params)?;
            cleaning_up(&output, || {
                let file = BufWriter::new(File::create(&output)?);
                let mut w = Y4mWriter::new(file, params.geometry, fps)?;
                while let Some(f) = source.next_frame()? {
                    w.write_frame(&f)?;
                }
                w.into_inner()?;
                Ok(())
            })?;
            writeln!(out, "{}: frames={frames}", output.display())?;
        }
    }
    Ok(())
}

fn init_logging() {
    let filter = std::env::var("SFIX_LOG").unwrap_or_else(|_| "warn".to_string());
    let _ = env_logger::Builder::new()
        .parse_filters(&filter)
        .format_timestamp_millis()
        .try_init();
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn main() -> i32 {
    init_logging();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            error!("{e}");
            eprintln!("sfix: {e}");
            1
        }
    }
}
