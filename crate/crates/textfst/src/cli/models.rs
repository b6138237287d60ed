use std::fmt::Write;
use std::path::PathBuf;

use clap::{Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use textfst_core::cart::{cv_select, export_rules, grow_tree, prune_sequence, Criterion, GrowParams, Prediction, Tree};
use textfst_core::declist::{learn_llr, learn_sac, prune_list, Example, LlrParams, Retain, Templates};

use super::{data, key_value, load, Failure, Outcome};
use crate::formats::dataset::{read_dataset, read_rows};
use crate::formats::dlist::{atom_candidates, read_bool_table, read_candidates, read_contexts, read_list, write_list};
use crate::formats::fst::fmt_weight;
use crate::formats::tree::{read_tree, write_tree};

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum CriterionArg {
    Entropy,
    Error,
}

#[derive(Debug, clap::Args)]
pub struct GrowArgs {
    /// Fewest training rows in a leaf.
    #[arg(long, default_value_t = 1)]
    min_leaf: usize,
    #[arg(long, value_enum, default_value = "entropy")]
    criterion: CriterionArg,
}

impl GrowArgs {
    fn params(&self) -> GrowParams {
        let criterion = match self.criterion {
            CriterionArg::Entropy => Criterion::Entropy,
            CriterionArg::Error => Criterion::Error,
        };
        GrowParams { min_leaf: self.min_leaf, criterion }
    }
}

#[derive(Debug, Subcommand)]
pub enum TreeCmd {
    /// Grows a full tree.
    Train {
        data: PathBuf,
        #[command(flatten)]
        grow: GrowArgs,
    },
    /// Picks a pruned tree by cross-validation; the table of candidates is
    /// written as comment lines above the tree.
    Cv {
        data: PathBuf,
        #[arg(long, default_value_t = 10)]
        folds: usize,
        /// Shuffle rows (with --seed) before assigning folds.
        #[arg(long)]
        shuffle: bool,
        #[command(flatten)]
        grow: GrowArgs,
    },
    /// Weakest-link pruning sequence: alpha, leaves, resubstitution cost.
    PruneSeq { tree: PathBuf },
    /// Prediction per row.
    Predict { tree: PathBuf, data: PathBuf },
    /// Tree leaves as weighted rewrite rules.
    ExportRules {
        tree: PathBuf,
        /// Symbol being rewritten.
        #[arg(long)]
        focus: String,
        /// FEATURE=OFFSET naming the context position each feature tests.
        #[arg(long = "context", value_parser = key_value)]
        contexts: Vec<(String, String)>,
    },
}

pub fn run_tree(c: &TreeCmd, seed: u64) -> Outcome {
    match c {
        TreeCmd::Train { data: d, grow } => {
            let d = load(d, read_dataset)?;
            Ok(write_tree(&data(grow_tree(&d, grow.params()))?))
        }
        TreeCmd::Cv { data: d, folds, shuffle, grow } => {
            let mut d = load(d, read_dataset)?;
            if *shuffle {
                let mut idx: Vec<usize> = (0..d.len()).collect();
                idx.shuffle(&mut StdRng::seed_from_u64(seed));
                d = d.subset(&idx);
            }
            let s = data(cv_select(&d, grow.params(), *folds))?;
            let mut out = String::from("# alpha\tleaves\tcv_error\n");
            for (i, (step, e)) in s.sequence.iter().zip(&s.cv_errors).enumerate() {
                let mark = if i == s.index { "\t*" } else { "" };
                let _ = writeln!(out, "# {}\t{}\t{}{mark}", fmt_weight(step.alpha), step.leaves, fmt_weight(*e));
            }
            out.push_str(&write_tree(&s.tree));
            Ok(out)
        }
        TreeCmd::PruneSeq { tree } => {
            let t = load(tree, read_tree)?;
            let mut out = String::from("alpha\tleaves\tcost\n");
            for step in prune_sequence(&t) {
                let _ = writeln!(out, "{}\t{}\t{}", fmt_weight(step.alpha), step.leaves, fmt_weight(step.cost));
            }
            Ok(out)
        }
        TreeCmd::Predict { tree, data: d } => {
            let t: Tree = load(tree, read_tree)?;
            let rows = load(d, |s| read_rows(s, &t.features))?;
            let mut out = String::new();
            for row in rows {
                match data(t.predict(&row))? {
                    Prediction::Class { name, distribution, .. } => {
                        let dist: Vec<String> = distribution.iter().map(|&p| fmt_weight(p)).collect();
                        let _ = writeln!(out, "{name}\t{}", dist.join(","));
                    }
                    Prediction::Value(v) => {
                        let _ = writeln!(out, "{}", fmt_weight(v));
                    }
                }
            }
            Ok(out)
        }
        TreeCmd::ExportRules { tree, focus, contexts } => {
            let t = load(tree, read_tree)?;
            let mut ctx = Vec::new();
            for (f, o) in contexts {
                let o: i32 = o.parse().map_err(|_| Failure::Usage(format!("offset `{o}` of {f} is not an integer")))?;
                ctx.push((f.as_str(), o));
            }
            Ok(data(export_rules(&t, focus, &ctx))?.to_text())
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum RetainArg {
    /// Keep the half richer in the label being grown.
    TargetShare,
    /// Keep the lower-entropy half.
    LowerEntropy,
}

#[derive(Debug, clap::Args)]
pub struct ContextArgs {
    /// Words on each side for wide context and verb search.
    #[arg(long, default_value_t = 10)]
    window: usize,
}

#[derive(Debug, Subcommand)]
pub enum DlistCmd {
    /// Separate-and-conquer over a 0/1 table (label last).
    LearnSac {
        table: PathBuf,
        #[arg(long, value_enum, default_value = "target-share")]
        retain: RetainArg,
    },
    /// Log-likelihood-ratio list over collocations of labeled contexts.
    LearnLlr {
        contexts: PathBuf,
        /// Candidate features, one per line; by default every atom seen.
        #[arg(long)]
        candidates: Option<PathBuf>,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        /// Compare Pr(collocation | label) rather than the posterior.
        #[arg(long)]
        prior_scaled: bool,
        /// Scores in bits.
        #[arg(long)]
        bits: bool,
        /// Global against residual counts, in [0, 1].
        #[arg(long, default_value_t = 1.0)]
        global_weight: f64,
        #[command(flatten)]
        ctx: ContextArgs,
    },
    /// Subsumption then held-out pruning.
    Prune {
        list: PathBuf,
        #[arg(long)]
        train: PathBuf,
        #[arg(long)]
        heldout: PathBuf,
        #[command(flatten)]
        ctx: ContextArgs,
    },
    /// Label per context with the deciding entry (or `default`).
    Classify {
        list: PathBuf,
        contexts: PathBuf,
        #[command(flatten)]
        ctx: ContextArgs,
    },
}

fn examples(path: &PathBuf, ctx: &ContextArgs) -> Result<Vec<Example>, Failure> {
    let cs = load(path, read_contexts)?;
    Ok(cs.iter().map(|c| c.instance(&Templates::default(), ctx.window)).collect())
}

pub fn run_dlist(c: &DlistCmd) -> Outcome {
    match c {
        DlistCmd::LearnSac { table, retain } => {
            let d = load(table, read_bool_table)?;
            let retain = match retain {
                RetainArg::TargetShare => Retain::TargetShare,
                RetainArg::LowerEntropy => Retain::LowerEntropy,
            };
            Ok(write_list(&data(learn_sac(&d, retain))?))
        }
        DlistCmd::LearnLlr { contexts, candidates, epsilon, prior_scaled, bits, global_weight, ctx } => {
            if !(0.0..=1.0).contains(global_weight) {
                return Err(Failure::Usage(format!("--global-weight {global_weight} is outside [0, 1]")));
            }
            let ex = examples(contexts, ctx)?;
            let cands = match candidates {
                Some(p) => read_candidates(&super::read_text(p)?),
                None => atom_candidates(&ex),
            };
            let params = LlrParams { epsilon: *epsilon, prior_scaled: *prior_scaled, base2: *bits, global_weight: *global_weight };
            Ok(write_list(&data(learn_llr(&cands, &ex, params))?))
        }
        DlistCmd::Prune { list, train, heldout, ctx } => {
            let l = load(list, read_list)?;
            let (tr, ho) = (examples(train, ctx)?, examples(heldout, ctx)?);
            Ok(write_list(&prune_list(&l, &ho, &tr)))
        }
        DlistCmd::Classify { list, contexts, ctx } => {
            let l = load(list, read_list)?;
            let mut out = String::new();
            for (x, _) in examples(contexts, ctx)? {
                let (label, entry) = l.classify(&x);
                let by = entry.map_or_else(|| "default".to_string(), |i| l.entries[i].feature.to_string());
                let _ = writeln!(out, "{label}\t{by}");
            }
            Ok(out)
        }
    }
}
