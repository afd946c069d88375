fn main() {
    // System OpenBLAS bundles the LAPACK routines we bind in sdp::lapack.
    println!("cargo:rustc-link-lib=dylib=openblas");
    println!("cargo:rustc-link-search=native=/usr/lib/x86_64-linux-gnu");
}
