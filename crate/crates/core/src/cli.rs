//! Command-line front end. Exit codes: 0 success, 1 input errors, 2 lexicon
//! errors.

use std::ffi::OsString;
use std::fs;
use std::io::{Read, Write};
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};

use crate::edit::{apply_all, check_pre_edit, parse_commands};
use crate::lexicon::{Category, FeatureBundle, Lexicon};
use crate::morph::{analyze_in, analyze_word, debug_format, synthesize};
use crate::pipeline::{analyze_tokens, run_pipeline, tokenize, PipelineConfig};
use crate::render::{parse_notation, render, DetailLevel};
use crate::service::{serve, SessionStore};

pub const EXIT_INPUT: i32 = 1;
pub const EXIT_LEXICON: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "anusaaraka", version, about = "Shallow-transfer anusaaraka engine")]
struct Cli {
    /// Lexicon directory of the language pair.
    #[arg(long, global = true, default_value = "data/sample-tel-hin")]
    lexicon: PathBuf,
    /// Expected pair name; must match the lexicon directory name.
    #[arg(long, global = true)]
    pair: Option<String>,
    /// Start even if the lexicon has cross-reference problems.
    #[arg(long, global = true)]
    skip_validation: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Translate text (file or stdin) into dialect notation.
    Translate {
        input: Option<PathBuf>,
        #[arg(long, default_value_t = DetailLevel::Full)]
        detail: DetailLevel,
        /// Print each token's analyses to stderr.
        #[arg(long)]
        debug_analyses: bool,
    },
    /// Print the analyses of each word, `/`-separated.
    Analyze {
        #[arg(required = true)]
        words: Vec<String>,
        /// Use the target-language dictionary.
        #[arg(long)]
        target: bool,
    },
    /// Generate a word form from root, category and features.
    Synthesize {
        root: String,
        category: Category,
        /// `key=value,...`; `-` for none.
        #[arg(default_value = "-")]
        features: String,
        /// Use the source-language dictionary.
        #[arg(long)]
        source: bool,
    },
    /// Report pre-editing issues as line:column diagnostics.
    Check { input: Option<PathBuf> },
    /// Translate, then apply a post-editing command script.
    Edit {
        /// Command script, one command per line.
        #[arg(long)]
        apply: PathBuf,
        input: Option<PathBuf>,
        /// The input is level-2 notation rather than source text.
        #[arg(long)]
        notation: bool,
        #[arg(long, default_value_t = DetailLevel::Full)]
        detail: DetailLevel,
    },
    /// Check the lexicon's cross-references; silent when clean.
    ValidateLexicon,
    /// Run the HTTP service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
        /// Append-only session journal, replayed at startup.
        #[arg(long)]
        journal: Option<PathBuf>,
    },
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Io<'_> {
    fn read(&mut self, input: &Option<PathBuf>) -> Result<(String, String), i32> {
        match input {
            Some(p) if p != Path::new("-") => match fs::read_to_string(p) {
                Ok(t) => Ok((t, p.display().to_string())),
                Err(e) => Err(self.fail(EXIT_INPUT, format_args!("{}: {e}", p.display()))),
            },
            _ => {
                let mut t = String::new();
                match self.stdin.read_to_string(&mut t) {
                    Ok(_) => Ok((t, "<stdin>".into())),
                    Err(e) => Err(self.fail(EXIT_INPUT, format_args!("<stdin>: {e}"))),
                }
            }
        }
    }

    fn fail(&mut self, code: i32, msg: std::fmt::Arguments) -> i32 {
        let _ = writeln!(self.err, "anusaaraka: {msg}");
        code
    }
}

fn load(cli: &Cli, io: &mut Io, validate: bool) -> Result<Lexicon, i32> {
    let config = PipelineConfig {
        lexicon_dir: cli.lexicon.clone(),
        pair: cli.pair.clone(),
        ..PipelineConfig::default()
    };
    let lex = Lexicon::load_dir(&config.lexicon_dir).map_err(|e| io.fail(EXIT_LEXICON, format_args!("{e}")))?;
    if let Some(p) = &config.pair {
        if p != lex.pair() {
            return Err(io.fail(
                EXIT_LEXICON,
                format_args!("lexicon `{}` is for pair `{}`, not `{p}`", config.lexicon_dir.display(), lex.pair()),
            ));
        }
    }
    if validate {
        let diags = lex.validate();
        if !diags.is_empty() {
            for d in &diags {
                let _ = writeln!(io.err, "{d}");
            }
            return Err(io.fail(
                EXIT_LEXICON,
                format_args!("lexicon has {} problem(s); see `validate-lexicon`", diags.len()),
            ));
        }
    }
    Ok(lex)
}

/// Runs the CLI with the given arguments and streams; returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut io = Io { stdin, out, err };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(io.err, "{text}");
                EXIT_INPUT
            } else {
                let _ = write!(io.out, "{text}");
                0
            };
        }
    };
    match execute(&cli, &mut io) {
        Ok(()) => 0,
        Err(code) => code,
    }
}

fn execute(cli: &Cli, io: &mut Io) -> Result<(), i32> {
    let validate = !cli.skip_validation;
    match &cli.command {
        Command::ValidateLexicon => {
            let lex = load(cli, io, false)?;
            let diags = lex.validate();
            for d in &diags {
                let _ = writeln!(io.out, "{d}");
            }
            if !diags.is_empty() {
                return Err(EXIT_LEXICON);
            }
        }
        Command::Translate {
            input,
            detail,
            debug_analyses,
        } => {
            let lex = load(cli, io, validate)?;
            let (text, _) = io.read(input)?;
            if *debug_analyses {
                for t in analyze_tokens(&tokenize(&text), &lex).iter().filter(|t| !t.punct) {
                    let _ = writeln!(io.err, "{}\t{}", t.token, debug_format(&t.analyses));
                }
            }
            let _ = write!(io.out, "{}", render(&run_pipeline(&text, &lex), *detail));
        }
        Command::Analyze { words, target } => {
            let lex = load(cli, io, validate)?;
            let mut missing = false;
            for w in words {
                let a = if *target {
                    analyze_in(w, lex.target(), &[])
                } else {
                    analyze_word(w, &lex)
                };
                if a.is_empty() {
                    missing = true;
                    let _ = writeln!(io.err, "{w}: no analysis");
                } else {
                    let _ = writeln!(io.out, "{}", debug_format(&a));
                }
            }
            if missing {
                return Err(EXIT_INPUT);
            }
        }
        Command::Synthesize {
            root,
            category,
            features,
            source,
        } => {
            let lex = load(cli, io, validate)?;
            let bundle: FeatureBundle = features
                .parse()
                .map_err(|e| io.fail(EXIT_INPUT, format_args!("{e}")))?;
            let lang = if *source { lex.source() } else { lex.target() };
            match synthesize(root, *category, &bundle, lang) {
                Ok(form) => {
                    let _ = writeln!(io.out, "{form}");
                }
                Err(e) => return Err(io.fail(EXIT_INPUT, format_args!("{e}"))),
            }
        }
        Command::Check { input } => {
            let lex = load(cli, io, validate)?;
            let (text, name) = io.read(input)?;
            let issues = check_pre_edit(&text, &lex);
            for i in &issues {
                let before = &text[..i.span.start];
                let line = before.matches('\n').count() + 1;
                let col = before.rsplit('\n').next().unwrap_or("").chars().count() + 1;
                let mut msg = format!("{name}:{line}:{col}: {}: `{}`", i.kind.name(), i.text);
                if !i.suggestions.is_empty() {
                    let s: Vec<&str> = i.suggestions.iter().map(|s| s.replacement.as_str()).collect();
                    msg.push_str(&format!(" -> {}", s.join(" | ")));
                }
                let _ = writeln!(io.out, "{msg}");
            }
            if !issues.is_empty() {
                return Err(EXIT_INPUT);
            }
        }
        Command::Edit {
            apply,
            input,
            notation,
            detail,
        } => {
            let lex = load(cli, io, validate)?;
            let script = fs::read_to_string(apply)
                .map_err(|e| io.fail(EXIT_INPUT, format_args!("{}: {e}", apply.display())))?;
            let cmds = parse_commands(&script)
                .map_err(|(line, e)| io.fail(EXIT_INPUT, format_args!("{}:{line}: {e}", apply.display())))?;
            let (text, name) = io.read(input)?;
            let doc = if *notation {
                parse_notation(&text)
                    .map_err(|e| io.fail(EXIT_INPUT, format_args!("{name}: byte {}: {}", e.offset, e.message)))?
            } else {
                run_pipeline(&text, &lex)
            };
            let done = apply_all(&doc, &cmds, &lex).map_err(|(i, e)| {
                io.fail(EXIT_INPUT, format_args!("{}: command `{}`: {e}", apply.display(), cmds[i]))
            })?;
            let _ = write!(io.out, "{}", render(&done, *detail));
        }
        Command::Serve { port, host, journal } => {
            let lex = Arc::new(load(cli, io, true)?);
            let store = match journal {
                Some(p) => SessionStore::with_journal(lex, p).map_err(|e| io.fail(EXIT_INPUT, format_args!("{e}")))?,
                None => SessionStore::new(lex),
            };
            let addr = SocketAddr::new(*host, *port);
            let rt = tokio::runtime::Runtime::new().map_err(|e| io.fail(EXIT_INPUT, format_args!("{e}")))?;
            let _ = writeln!(io.err, "listening on http://{addr}");
            rt.block_on(serve(Arc::new(store), addr))
                .map_err(|e| io.fail(EXIT_INPUT, format_args!("{addr}: {e}")))?;
        }
    }
    Ok(())
}
