fn main() {
    std::process::exit(krein_bc::cli::main_entry());
}
