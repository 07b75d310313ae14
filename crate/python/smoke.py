"""Smoke test for the mira_py extension: one round trip per variant plus an
estimator lookup. Exits nonzero on the first failure."""

import sys

import mira_py


def main() -> int:
    for variant in ("additive", "threshold"):
        pk, sk = mira_py.keygen(variant, 1, b"smoke seed")
        sig = mira_py.sign(sk, b"hello", b"entropy")
        assert mira_py.verify(pk, b"hello", sig), "valid signature rejected"
        assert not mira_py.verify(pk, b"hullo", sig), "wrong message accepted"
        try:
            mira_py.verify(pk, b"hello", sig[:-1])
        except ValueError:
            pass
        else:
            raise AssertionError("truncated signature not flagged")
        print(f"{variant}-L1: pk {len(pk)} B, sk {len(sk)} B, sig {len(sig)} B, ok")

    assert mira_py.signature_size("additive", 1) == 5640
    report = mira_py.estimate("threshold", 1)
    print(f"threshold-L1 estimate: avg {report['sig_avg_bytes']} B, "
          f"KZ 2^{report['log2_kz_cost']}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
