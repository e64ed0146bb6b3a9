use nichols::samples::*;

fn main() {
    let out = std::path::Path::new("fixtures");
    for (name, inst) in [
        ("a3_n2_example", fixture_a3_n2()),
        ("a2_n3_bdr", fixture_a2_n3_bdr()),
        ("a5_n2_notinH", fixture_a5_n2()),
        ("a5_n3_notinH", fixture_a5_n3()),
    ] {
        let combined = serde_json::json!({
            "realization": inst.real.to_file(),
            "params": inst.params.to_file(),
        });
        let path = out.join(format!("{name}.json"));
        std::fs::write(&path, serde_json::to_string_pretty(&combined).unwrap()).unwrap();
        println!("wrote {}", path.display());
    }
}
