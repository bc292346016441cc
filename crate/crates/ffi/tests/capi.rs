//! Exercises the C ABI through the exported extern "C" functions: handle
//! lifecycles, status codes, and the password -> deal -> reconstruct ->
//! password pipeline a foreign caller would run.

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use graphshare_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take_string(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = CStr::from_ptr(p).to_str().unwrap().to_string();
    gs_string_free(p);
    s
}

unsafe fn last_error() -> String {
    CStr::from_ptr(gs_last_error_message())
        .to_str()
        .unwrap()
        .to_string()
}

#[test]
fn password_deal_reconstruct_pipeline() {
    unsafe {
        let mut graph: *mut GsGraph = ptr::null_mut();
        let pw = cstr("Aa0Zz9Mq");
        assert_eq!(gs_password_encode(pw.as_ptr(), &mut graph), GsStatus::Ok);

        let mut nodes = 0u64;
        assert_eq!(gs_graph_node_count(graph, &mut nodes), GsStatus::Ok);
        assert_eq!(nodes, 11);

        let alphabet = cstr("n00,n01,n02,n03,n04,n05,n06,n07,n08,n09,n10");
        let mut secret: *mut GsGraphSecret = ptr::null_mut();
        assert_eq!(
            gs_graph_secret_new(alphabet.as_ptr(), graph, &mut secret),
            GsStatus::Ok
        );
        gs_graph_free(graph);

        // padding below the floor requires the insecure override
        let mut deal: *mut GsGraphShareList = ptr::null_mut();
        assert_eq!(
            gs_graph_deal(secret, 3, 93, false, 7, &mut deal),
            GsStatus::SchemeFailed
        );
        assert!(last_error().contains("security floor"), "{}", last_error());
        assert_eq!(
            gs_graph_deal(secret, 3, 93, true, 7, &mut deal),
            GsStatus::Ok
        );
        assert_eq!(gs_share_list_len(deal), 3);

        // shares travel as .gshare text
        let mut share_a: *mut GsGraphShare = ptr::null_mut();
        let mut share_b: *mut GsGraphShare = ptr::null_mut();
        assert_eq!(gs_share_list_get(deal, 0, &mut share_a), GsStatus::Ok);
        assert_eq!(gs_share_list_get(deal, 2, &mut share_b), GsStatus::Ok);
        gs_share_list_free(deal);

        let mut text_ptr: *mut c_char = ptr::null_mut();
        assert_eq!(gs_graph_share_to_text(share_a, &mut text_ptr), GsStatus::Ok);
        let text_a = take_string(text_ptr);
        assert!(text_a.starts_with("GRAPHSHARE v1\n"), "{text_a}");
        gs_graph_share_free(share_a);

        let reparsed = cstr(&text_a);
        let mut share_a2: *mut GsGraphShare = ptr::null_mut();
        assert_eq!(
            gs_graph_share_parse(reparsed.as_ptr(), &mut share_a2),
            GsStatus::Ok
        );

        let mut feasible = 0u64;
        let mut candidates = 0u64;
        // c = 11 exceeds any sane enumeration cap
        assert_eq!(
            gs_share_feasible_candidates(share_a2, 5, &mut feasible, &mut candidates),
            GsStatus::SchemeFailed
        );

        let mut recovered: *mut GsGraphSecret = ptr::null_mut();
        assert_eq!(
            gs_graph_reconstruct(share_a2, share_b, &mut recovered),
            GsStatus::Ok
        );
        gs_graph_share_free(share_a2);
        gs_graph_share_free(share_b);

        let mut alphabet_out: *mut c_char = ptr::null_mut();
        assert_eq!(
            gs_graph_secret_alphabet(recovered, &mut alphabet_out),
            GsStatus::Ok
        );
        assert_eq!(take_string(alphabet_out), "n00,n01,n02,n03,n04,n05,n06,n07,n08,n09,n10");

        let mut recovered_graph: *mut GsGraph = ptr::null_mut();
        assert_eq!(
            gs_graph_secret_graph(recovered, &mut recovered_graph),
            GsStatus::Ok
        );
        gs_graph_secret_free(recovered);
        gs_graph_secret_free(secret);

        let mut password_out: *mut c_char = ptr::null_mut();
        assert_eq!(
            gs_password_decode(recovered_graph, &mut password_out),
            GsStatus::Ok
        );
        assert_eq!(take_string(password_out), "Aa0Zz9Mq");
        gs_graph_free(recovered_graph);
    }
}

#[test]
fn small_deal_is_uniform_under_the_analyzer() {
    unsafe {
        let text = cstr("nodes: 0,1,2\nedge: 0 1\n");
        let mut graph: *mut GsGraph = ptr::null_mut();
        assert_eq!(gs_graph_parse(text.as_ptr(), &mut graph), GsStatus::Ok);

        let alphabet = cstr("a,b,c");
        let mut secret: *mut GsGraphSecret = ptr::null_mut();
        assert_eq!(
            gs_graph_secret_new(alphabet.as_ptr(), graph, &mut secret),
            GsStatus::Ok
        );
        gs_graph_free(graph);

        let mut min_b = 0u64;
        assert_eq!(gs_min_padding(3, &mut min_b), GsStatus::Ok);
        assert_eq!(min_b, 2);

        let mut deal: *mut GsGraphShareList = ptr::null_mut();
        assert_eq!(
            gs_graph_deal(secret, 2, min_b, false, 11, &mut deal),
            GsStatus::Ok
        );
        gs_graph_secret_free(secret);

        let mut share: *mut GsGraphShare = ptr::null_mut();
        assert_eq!(gs_share_list_get(deal, 0, &mut share), GsStatus::Ok);
        gs_share_list_free(deal);

        let mut feasible = 0u64;
        let mut candidates = 0u64;
        assert_eq!(
            gs_share_feasible_candidates(share, 5, &mut feasible, &mut candidates),
            GsStatus::Ok
        );
        assert_eq!((feasible, candidates), (8, 8));
        gs_graph_share_free(share);
    }
}

#[test]
fn set_scheme_text_round_trip() {
    unsafe {
        let secret = cstr("0\n2\n13");
        let mut list: *mut GsStringList = ptr::null_mut();
        assert_eq!(gs_set_deal(secret.as_ptr(), 3, 5, 1, &mut list), GsStatus::Ok);
        assert_eq!(gs_string_list_len(list), 5);

        let share_texts: Vec<CString> = (0..5)
            .map(|i| CStr::from_ptr(gs_string_list_get(list, i)).to_owned())
            .collect();
        gs_string_list_free(list);
        assert!(share_texts[0].to_str().unwrap().starts_with("SETSHARE v1\n"));

        let ptrs: Vec<*const c_char> = share_texts.iter().map(|s| s.as_ptr()).collect();

        // two shares: refused, then forced with the below-threshold marker
        let mut below = false;
        let mut out: *mut c_char = ptr::null_mut();
        assert_eq!(
            gs_set_combine(ptrs.as_ptr(), 2, false, &mut below, &mut out),
            GsStatus::BelowThreshold
        );
        assert_eq!(
            gs_set_combine(ptrs.as_ptr(), 2, true, &mut below, &mut out),
            GsStatus::Ok
        );
        assert!(below);
        let forced = take_string(out);
        assert!(forced.lines().count() > 3, "{forced}");

        let mut out: *mut c_char = ptr::null_mut();
        assert_eq!(
            gs_set_combine(ptrs.as_ptr(), 3, false, &mut below, &mut out),
            GsStatus::Ok
        );
        assert!(!below);
        let mut tokens: Vec<&str> = Vec::new();
        let text = take_string(out);
        tokens.extend(text.lines());
        tokens.sort_unstable();
        assert_eq!(tokens, ["0", "13", "2"]);
    }
}

#[test]
fn status_codes_for_bad_inputs() {
    unsafe {
        let mut graph: *mut GsGraph = ptr::null_mut();
        assert_eq!(
            gs_graph_parse(ptr::null(), &mut graph),
            GsStatus::NullPointer
        );

        let bad = cstr("nodes: 2,1\n");
        assert_eq!(gs_graph_parse(bad.as_ptr(), &mut graph), GsStatus::ParseFailed);
        assert!(last_error().contains("line 1"), "{}", last_error());

        let bad_pw = cstr("nope");
        assert_eq!(
            gs_password_encode(bad_pw.as_ptr(), &mut graph),
            GsStatus::InvalidArgument
        );

        let mut out = 0u64;
        assert_eq!(gs_min_padding(0, &mut out), GsStatus::InvalidArgument);

        // costs of the flat model
        assert_eq!(gs_reconstruction_cost(11, 93, &mut out), GsStatus::Ok);
        assert_eq!(out, 159);
        assert_eq!(gs_shamir_cost(48, &mut out), GsStatus::Ok);
        assert_eq!(out, 110_592);
    }
}
