//! Compiles and runs a small C program against the generated header and the
//! static library, proving the ABI end to end.

use std::path::PathBuf;
use std::process::Command;

const C_SOURCE: &str = r#"
#include <stdio.h>
#include <string.h>
#include "nichols.h"

int main(void) {
    const char *realization =
        "{\"theta\":2,\"N\":3,\"M\":3,"
        "\"group\":{\"free_rank\":2,\"torsion\":[]},"
        "\"g\":[[1,0],[0,1]],"
        "\"chi\":[[1,1],[1,1]]}";
    const char *params =
        "{\"lambda\":{\"1,2\":\"1\",\"2,1\":\"1\"},"
        "\"mu\":{\"1,1\":\"1\",\"2,2\":\"1\",\"1,2\":\"1\"}}";
    NlaInstance *h = NULL;
    if (nla_instance_new(realization, params, &h) != NLA_STATUS_OK) {
        fprintf(stderr, "new failed: %s\n", nla_last_error());
        return 1;
    }
    uint64_t total = 0;
    if (nla_dim(h, 0, 0, &total) != NLA_STATUS_OK || total != 27) {
        fprintf(stderr, "dim failed\n");
        return 1;
    }
    char *sigma = NULL;
    if (nla_sigma(h, 1, 2, &sigma) != NLA_STATUS_OK) {
        fprintf(stderr, "sigma failed: %s\n", nla_last_error());
        return 1;
    }
    if (strstr(sigma, "oracle") == NULL) {
        return 1;
    }
    nla_string_free(sigma);
    nla_instance_free(h);
    printf("ok %llu\n", (unsigned long long)total);
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    let cc = ["cc", "gcc", "clang"]
        .iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok());
    let cc = match cc {
        Some(c) => *c,
        None => {
            eprintln!("no C compiler available; skipping ABI link test");
            return;
        }
    };
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let include = manifest.join("include");
    // the staticlib built for this test run
    let lib_dir = {
        let mut p = PathBuf::from(std::env::current_exe().unwrap());
        p.pop(); // deps
        p.pop(); // debug or release
        p
    };
    assert!(
        lib_dir.join("libnichols_capi.a").exists(),
        "staticlib not found in {}",
        lib_dir.display()
    );
    let tmp = std::env::temp_dir().join(format!("nla_abi_{}", std::process::id()));
    std::fs::create_dir_all(&tmp).unwrap();
    let src = tmp.join("smoke.c");
    std::fs::write(&src, C_SOURCE).unwrap();
    let exe = tmp.join("smoke");
    let status = Command::new(cc)
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg("-L")
        .arg(&lib_dir)
        .arg("-lnichols_capi")
        .arg("-lpthread")
        .arg("-ldl")
        .arg("-lm")
        .arg("-o")
        .arg(&exe)
        .status()
        .expect("compiler invocation");
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&exe).output().expect("run smoke binary");
    assert!(out.status.success(), "smoke binary failed: {:?}", out);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("ok 27"), "unexpected output: {stdout}");
    let _ = std::fs::remove_dir_all(&tmp);
}
