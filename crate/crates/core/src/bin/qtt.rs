use clap::{Parser, Subcommand};
use qtt_core::cli::{self, Reply, Repl, Step};
use std::io::{BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "qtt", version, about = "Type checker, REPL and interpreter for a language with 0/1/ω binders")]
struct Args {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Elaborate a file and report its declarations.
    Check { file: PathBuf },
    /// Run an entry point.
    Run {
        file: PathBuf,
        #[arg(long, default_value = "main")]
        entry: String,
        /// Read program input from this file instead of stdin.
        #[arg(long)]
        stdin_file: Option<PathBuf>,
    },
    /// Print the run-time form of a definition.
    DumpErased { file: PathBuf, name: String },
    /// Interactive loop.
    Repl {
        file: Option<PathBuf>,
        #[arg(long)]
        stdin_file: Option<PathBuf>,
    },
}

fn emit(r: &Reply) {
    print!("{}", r.stdout);
    eprint!("{}", r.stderr);
    let _ = std::io::stdout().flush();
}

fn repl(file: Option<PathBuf>, stdin_file: Option<PathBuf>, color: bool) -> i32 {
    let mut st = Repl::new();
    st.color = color;
    st.stdin_file = stdin_file;
    if let Some(f) = file {
        emit(&st.load(&f));
    }
    let stdin = std::io::stdin();
    loop {
        print!("qtt> ");
        let _ = std::io::stdout().flush();
        let mut line = String::new();
        match stdin.lock().read_line(&mut line) {
            Ok(0) | Err(_) => return 0,
            Ok(_) => {}
        }
        match st.handle(&line) {
            Step::Continue(r) => emit(&r),
            Step::Quit => return 0,
        }
    }
}

fn real_main() -> i32 {
    let args = Args::parse();
    let color = cli::color_enabled();
    let r = match args.cmd {
        Cmd::Check { file } => cli::check(&file, color),
        Cmd::Run { file, entry, stdin_file } => cli::run(&file, &entry, stdin_file.as_deref(), true, color),
        Cmd::DumpErased { file, name } => cli::dump_erased(&file, &name, color),
        Cmd::Repl { file, stdin_file } => return repl(file, stdin_file, color),
    };
    emit(&r);
    r.code
}

fn main() -> ExitCode {
    // Deeply recursive programs need more stack than the main thread has.
    let code = std::thread::Builder::new()
        .stack_size(256 << 20)
        .spawn(real_main)
        .expect("spawn interpreter thread")
        .join()
        .unwrap_or(101);
    ExitCode::from(code as u8)
}
