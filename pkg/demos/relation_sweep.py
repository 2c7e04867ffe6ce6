"""Exhaustive Church-Rosser and Newman checks over all relation pairs on 3 points."""

import time

from hka.relations import cr_sweep, newman_sweep


def main():
    t = time.time()
    checked, bad = cr_sweep(3)
    print(f"Church-Rosser: {checked} pairs, {len(bad)} mismatches ({time.time() - t:.1f}s)")
    checked, bad = newman_sweep(3)
    print(f"Newman: {checked} Noetherian pairs, {len(bad)} mismatches")


if __name__ == "__main__":
    main()
