//! The `fivelist` command line.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use crate::colorability::{AlonTarsiConfig, FilterConfig, Verdict};
use crate::cycle_canvas::{run_class, CycleCanvas, CycleLibrary, GenConfig};
use crate::prism_canvas::{glue_closure, run_spacing, FillIndex, PrismCanvas, PrismConfig};
use crate::store::{
    cycle_class_name, load_cycle_library, load_prisms, prism_class_name, read_records, stats, DedupStore, Record,
    ToRecord,
};
use crate::torus::{classify, run_torus_pipeline, torus_filter, ObstructionSet, TorusConfig, TORUS_AT_CUTOFF};
use crate::work::{ClassSink, Discard};

#[derive(Parser, Debug)]
#[command(name = "fivelist", version, about = "Candidates for critical canvases in 5-list-coloring")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct RunOpts {
    /// Continue an interrupted run in the output directory.
    #[arg(long)]
    pub resume: bool,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Skip Alon–Tarsi searches on components with more edges than this.
    #[arg(long)]
    pub at_cutoff: Option<usize>,
    /// Write discarded canvases with their witnesses to `discards-*.txt`.
    #[arg(long)]
    pub log_discards: bool,
}

impl RunOpts {
    fn filter(&self) -> FilterConfig {
        let mut at = AlonTarsiConfig::default();
        if let Some(e) = self.at_cutoff {
            at.edge_cutoff = e;
        }
        FilterConfig { at, ..FilterConfig::default() }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enumerate cycle-canvas candidates for circumferences 3..=N.
    GenCycles {
        /// Largest circumference.
        #[arg(long)]
        max_circ: usize,
        /// Run directory: one file per circumference plus the journal.
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        run: RunOpts,
    },
    /// Enumerate prism-canvas candidates from skeletons, spacings 0..=D.
    GenPrisms {
        /// Largest spacing (distance between the two triangles).
        #[arg(long)]
        max_spacing: usize,
        /// Directory written by gen-cycles, covering circumferences up to 2D+6.
        #[arg(long)]
        cycles: PathBuf,
        /// Run directory: one file per spacing plus the journal.
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        run: RunOpts,
    },
    /// Glue prism-canvas candidates along triangles; writes the new survivors.
    GluePrisms {
        /// Directory written by gen-prisms.
        #[arg(long = "in")]
        input: PathBuf,
        /// Directory written by gen-cycles; enables the skeleton-face check.
        #[arg(long)]
        cycles: Option<PathBuf>,
        /// Run directory for the discard log and journal.
        #[arg(long)]
        out: PathBuf,
        /// Glue only parts whose spacings sum to at most this, and keep results up to it.
        #[arg(long)]
        max_spacing: usize,
        #[arg(long, default_value_t = 4)]
        max_rounds: usize,
        #[command(flatten)]
        run: RunOpts,
    },
    /// Glue the ends of every prism-canvas candidate and classify the toroidal graphs.
    GlueTorus {
        /// Directory written by gen-prisms.
        #[arg(long = "in")]
        input: PathBuf,
        /// Obstruction data file (default: the bundled one).
        #[arg(long)]
        obstructions: Option<PathBuf>,
        /// TSV report: key, classification, witness, provenance.
        #[arg(long)]
        out: PathBuf,
        /// Largest spacing of the prism-canvases that are closed up.
        #[arg(long, default_value_t = 4)]
        max_spacing: usize,
        /// Also try the three gluings that reverse orientation.
        #[arg(long)]
        nonorientable: bool,
        /// Worker threads (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
        /// Skip Alon–Tarsi searches on graphs with more edges than this.
        #[arg(long, default_value_t = TORUS_AT_CUTOFF)]
        at_cutoff: usize,
    },
    /// Run the criticality filter on every record of a file.
    Check {
        /// Record file.
        #[arg(long)]
        input: PathBuf,
    },
    /// Print the canonical key of every record of a file.
    Canon {
        /// Record file.
        #[arg(long)]
        input: PathBuf,
    },
    /// Print `param count maxV` per class of a run directory.
    Stats { dir: PathBuf },
}

fn set_jobs(jobs: Option<usize>) -> anyhow::Result<()> {
    if let Some(k) = jobs {
        if k == 0 {
            bail!("--jobs must be positive");
        }
        // a second call in one process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
    }
    Ok(())
}

fn cycles_of(recs: Vec<Record>, path: &Path) -> anyhow::Result<Vec<CycleCanvas>> {
    recs.into_iter()
        .map(|r| match r {
            Record::Cycle(c) => Ok(c),
            _ => bail!("{} holds a non-cycle record", path.display()),
        })
        .collect()
}

fn prisms_of(recs: Vec<Record>, path: &Path) -> anyhow::Result<Vec<PrismCanvas>> {
    recs.into_iter()
        .map(|r| match r {
            Record::Prism(p) => Ok(p),
            _ => bail!("{} holds a non-prism record", path.display()),
        })
        .collect()
}

pub fn gen_cycles(max_circ: usize, out: &Path, run: &RunOpts) -> anyhow::Result<CycleLibrary> {
    set_jobs(run.jobs)?;
    let cfg = GenConfig { filter: run.filter(), ..GenConfig::default() };
    let mut store = DedupStore::open(out, run.resume, run.log_discards)?;
    let mut library = CycleLibrary::new();
    for l in 3..=max_circ {
        let name = cycle_class_name(l);
        let mut resumed = cycles_of(store.load_class(&name)?, out)?;
        // file order depends on how the run was interrupted
        resumed.sort_by(|a, b| a.key().cmp(b.key()));
        if store.is_complete(&name) {
            library.insert(l, resumed);
            continue;
        }
        store.begin_class(&name)?;
        let kept = run_class(l, &library, resumed, &cfg, &mut store.sink(&name))?;
        store.mark_complete(&name)?;
        eprintln!("circumference {l}: {} candidates", kept.len());
        library.insert(l, kept);
    }
    Ok(library)
}

pub fn gen_prisms(max_spacing: usize, cycles: &Path, out: &Path, run: &RunOpts) -> anyhow::Result<()> {
    set_jobs(run.jobs)?;
    let library = load_cycle_library(cycles, 2 * max_spacing + 6)?;
    let cfg = PrismConfig { filter: run.filter(), ..PrismConfig::default() };
    let mut store = DedupStore::open(out, run.resume, run.log_discards)?;
    for d in 0..=max_spacing {
        let name = prism_class_name(d);
        if store.is_complete(&name) {
            continue;
        }
        let resumed = prisms_of(store.load_class(&name)?, out)?;
        store.begin_class(&name)?;
        let kept = run_spacing(d, &library, resumed, &cfg, &mut store.sink(&name))?;
        store.mark_complete(&name)?;
        eprintln!("spacing {d}: {} candidates", kept.len());
    }
    Ok(())
}

/// Files each survivor under the class of its own spacing.
struct SpacingSink<'a> {
    store: &'a mut DedupStore,
}

impl ClassSink<PrismCanvas> for SpacingSink<'_> {
    fn is_done(&self, item: &str) -> bool {
        self.store.is_done(item)
    }

    fn record(&mut self, item: &str, kept: &[PrismCanvas], discarded: &[Discard<PrismCanvas>]) -> crate::Result<()> {
        let mut by_spacing = std::collections::BTreeMap::<usize, Vec<PrismCanvas>>::new();
        for p in kept {
            by_spacing.entry(p.spacing()).or_default().push(p.clone());
        }
        for (d, ps) in by_spacing {
            let name = prism_class_name(d);
            self.store.begin_class(&name)?;
            let recs: Vec<Record> = ps.iter().map(ToRecord::to_record).collect();
            self.store.insert(&name, &recs)?;
        }
        self.store.sink("glue-discards").record(item, &[] as &[PrismCanvas], discarded)
    }
}

/// Returns the number of new candidates.
pub fn glue_prisms(
    input: &Path,
    cycles: Option<&Path>,
    out: &Path,
    max_spacing: usize,
    max_rounds: usize,
    run: &RunOpts,
) -> anyhow::Result<usize> {
    set_jobs(run.jobs)?;
    let sets = load_prisms(input, max_spacing)?;
    let fills = match cycles {
        Some(dir) => Some(FillIndex::new(&load_cycle_library(dir, 2 * max_spacing + 6)?)),
        None => None,
    };
    let cfg = PrismConfig { filter: run.filter(), ..PrismConfig::default() };
    let mut store = DedupStore::open(out, run.resume, run.log_discards)?;
    store.begin_class("glue-discards")?;
    let report =
        glue_closure(&sets, fills.as_ref(), max_spacing, max_rounds, &cfg, &mut SpacingSink { store: &mut store })?;
    let new: usize = report.new.values().map(Vec::len).sum();
    println!("examined\t{}", report.examined);
    println!("face-fill-discards\t{}", report.face_fill_discards);
    println!("over-limit\t{}", report.over_limit);
    println!("rounds\t{}", report.rounds);
    println!("new\t{new}");
    for (d, v) in &report.new {
        println!("new-spacing-{d}\t{}", v.len());
    }
    println!("max-spacing\t{}", report.max_spacing.map_or("-".into(), |d| d.to_string()));
    Ok(new)
}

pub fn glue_torus(
    input: &Path,
    obstructions: Option<&Path>,
    out: &Path,
    max_spacing: usize,
    nonorientable: bool,
    at_cutoff: usize,
) -> anyhow::Result<usize> {
    let obs = match obstructions {
        Some(p) => ObstructionSet::load(p)?,
        None => ObstructionSet::builtin(),
    };
    let prisms = load_prisms(input, max_spacing)?;
    let mut cfg = TorusConfig { orientable_only: !nonorientable, ..TorusConfig::default() };
    cfg.filter.at.edge_cutoff = at_cutoff;
    let report = run_torus_pipeline(&prisms, &obs, &cfg);
    fs::write(out, report.to_tsv()).with_context(|| format!("writing {}", out.display()))?;
    print!("{}", report.summary());
    let k7: Vec<String> = report.k7_sources().iter().map(usize::to_string).collect();
    println!("k7-from-spacing\t{}", if k7.is_empty() { "-".into() } else { k7.join(",") });
    println!("unresolved\t{}", report.unresolved());
    Ok(report.unresolved())
}

fn check(input: &Path) -> anyhow::Result<()> {
    let obs = ObstructionSet::builtin();
    for r in read_records(input)? {
        let (verdict, witness) = match &r {
            Record::Cycle(c) => verdict_text(c.filter(&FilterConfig::default())),
            Record::Prism(p) => verdict_text(p.filter(&FilterConfig::default())),
            Record::Torus { graph, .. } => {
                let (c, w) = classify(graph, &obs, &torus_filter());
                (c.to_string(), w)
            }
        };
        println!("{}\t{verdict}\t{witness}", r.key_hex());
    }
    Ok(())
}

fn verdict_text(v: Verdict) -> (String, String) {
    match v {
        Verdict::PossiblyCritical => ("PossiblyCritical".into(), String::new()),
        Verdict::ProvablyReducible(w) => ("ProvablyReducible".into(), w.to_string()),
    }
}

pub fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::GenCycles { max_circ, out, run } => {
            gen_cycles(max_circ, &out, &run)?;
        }
        Command::GenPrisms { max_spacing, cycles, out, run } => gen_prisms(max_spacing, &cycles, &out, &run)?,
        Command::GluePrisms { input, cycles, out, max_spacing, max_rounds, run } => {
            glue_prisms(&input, cycles.as_deref(), &out, max_spacing, max_rounds, &run)?;
        }
        Command::GlueTorus { input, obstructions, out, max_spacing, nonorientable, jobs, at_cutoff } => {
            set_jobs(jobs)?;
            glue_torus(&input, obstructions.as_deref(), &out, max_spacing, nonorientable, at_cutoff)?;
        }
        Command::Check { input } => check(&input)?,
        Command::Canon { input } => {
            for r in read_records(&input)? {
                println!("{}", r.key_hex());
            }
        }
        Command::Stats { dir } => print!("{}", stats(&dir)?),
    }
    Ok(())
}
