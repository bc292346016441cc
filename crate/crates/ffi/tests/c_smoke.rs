//! Compiles and runs a small C program against the generated header and the
//! built shared library, so the header and the ABI are checked against each
//! other by an actual C toolchain.

use std::path::PathBuf;
use std::process::Command;

const C_SOURCE: &str = r#"
#include <assert.h>
#include <stdio.h>
#include <string.h>
#include "graphshare.h"

int main(void) {
    GsGraph *graph = NULL;
    assert(gs_password_encode("Aa0Zz9Mq", &graph) == GS_STATUS_OK);

    uint64_t nodes = 0;
    assert(gs_graph_node_count(graph, &nodes) == GS_STATUS_OK && nodes == 11);

    GsGraphSecret *secret = NULL;
    assert(gs_graph_secret_new("a,b,c,d,e,f,g,h,i,j,k", graph, &secret) == GS_STATUS_OK);
    gs_graph_free(graph);

    uint64_t floor_b = 0;
    assert(gs_min_padding(3, &floor_b) == GS_STATUS_OK && floor_b == 2);

    GsGraphShareList *deal = NULL;
    assert(gs_graph_deal(secret, 2, 93, true, 7, &deal) == GS_STATUS_OK);
    assert(gs_share_list_len(deal) == 2);

    GsGraphShare *a = NULL;
    GsGraphShare *b = NULL;
    assert(gs_share_list_get(deal, 0, &a) == GS_STATUS_OK);
    assert(gs_share_list_get(deal, 1, &b) == GS_STATUS_OK);
    gs_share_list_free(deal);

    GsGraphSecret *recovered = NULL;
    assert(gs_graph_reconstruct(a, b, &recovered) == GS_STATUS_OK);
    gs_graph_share_free(a);
    gs_graph_share_free(b);
    gs_graph_secret_free(secret);

    GsGraph *recovered_graph = NULL;
    assert(gs_graph_secret_graph(recovered, &recovered_graph) == GS_STATUS_OK);
    gs_graph_secret_free(recovered);

    char *password = NULL;
    assert(gs_password_decode(recovered_graph, &password) == GS_STATUS_OK);
    assert(strcmp(password, "Aa0Zz9Mq") == 0);
    gs_string_free(password);
    gs_graph_free(recovered_graph);

    /* error path: status code plus a message */
    GsGraph *bad = NULL;
    assert(gs_graph_parse("nodes: 2,1\n", &bad) == GS_STATUS_PARSE_FAILED);
    assert(strstr(gs_last_error_message(), "line 1") != NULL);

    puts("c smoke ok");
    return 0;
}
"#;

fn target_debug_dir() -> PathBuf {
    // tests run from the crate root; the workspace target dir sits two up
    // unless CARGO_TARGET_DIR overrides it
    std::env::var_os("CARGO_TARGET_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            PathBuf::from(env!("CARGO_MANIFEST_DIR"))
                .join("..")
                .join("..")
                .join("target")
        })
        .join("debug")
}

#[test]
fn c_program_compiles_links_and_runs() {
    let lib_dir = target_debug_dir();
    assert!(
        lib_dir.join("libgraphshare_ffi.so").exists(),
        "shared library not built at {}",
        lib_dir.display()
    );
    let include_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");

    let work = tempfile::tempdir().unwrap();
    let source = work.path().join("smoke.c");
    std::fs::write(&source, C_SOURCE).unwrap();
    let binary = work.path().join("smoke");

    let compile = Command::new("cc")
        .arg(&source)
        .arg("-o")
        .arg(&binary)
        .arg(format!("-I{}", include_dir.display()))
        .arg(format!("-L{}", lib_dir.display()))
        .arg("-lgraphshare_ffi")
        .arg(format!("-Wl,-rpath,{}", lib_dir.display()))
        .args(["-std=c99", "-Wall", "-Werror"])
        .output()
        .expect("run cc");
    assert!(
        compile.status.success(),
        "cc failed:\n{}",
        String::from_utf8_lossy(&compile.stderr)
    );

    let run = Command::new(&binary).output().expect("run smoke binary");
    assert!(
        run.status.success(),
        "smoke binary failed:\n{}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "c smoke ok");
}
