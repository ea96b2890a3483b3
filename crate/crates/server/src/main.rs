#[tokio::main]
async fn main() {
    tracing_subscriber::fmt()
        .with_writer(std::io::stderr)
        .with_target(false)
        .init();
    let code = phemotion_server::cli::run(std::env::args_os()).await;
    std::process::exit(code);
}
