//! The bus server subcommand.

use std::io::{self, Write};
use std::net::TcpListener;
use std::process::ExitCode;

use groundup::veto::{demo_bus, wire};

use crate::EXIT_PORT_BUSY;

pub fn serve(host: &str, port: u16) -> ExitCode {
    let listener = match TcpListener::bind((host, port)) {
        Ok(l) => l,
        Err(e) if e.kind() == io::ErrorKind::AddrInUse => {
            eprintln!("port {port} is busy");
            return ExitCode::from(EXIT_PORT_BUSY);
        }
        Err(e) => {
            eprintln!("cannot listen on {host}:{port}: {e}");
            return ExitCode::FAILURE;
        }
    };
    if let Err(e) = ctrlc::set_handler(|| {
        eprintln!("interrupted, shutting down");
        std::process::exit(0);
    }) {
        eprintln!("cannot install interrupt handler: {e}");
        return ExitCode::FAILURE;
    }
    let addr = listener.local_addr().map_or_else(|_| format!("{host}:{port}"), |a| a.to_string());
    println!("listening on {addr}");
    let _ = io::stdout().flush();
    let mut bus = demo_bus();
    match wire::serve_tcp(&mut bus, &listener) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("accept failed: {e}");
            ExitCode::FAILURE
        }
    }
}
