fn main() {
    std::process::exit(qset_workbench::cli::run());
}
