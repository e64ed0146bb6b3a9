fn main() {
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");
    let crate_dir = std::env::var("CARGO_MANIFEST_DIR").unwrap();
    let config = cbindgen::Config::from_root_or_default(&crate_dir);
    if let Ok(b) = cbindgen::Builder::new().with_crate(&crate_dir).with_config(config).generate() {
        b.write_to_file(std::path::Path::new(&crate_dir).join("include/nichols.h"));
    }
}
