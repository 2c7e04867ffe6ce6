"""Critical branchings of two small string rewriting systems."""

from importlib.resources import files

from hka.coherence import generate_fillers
from hka.polygraph import Polygraph, critical_branchings, is_terminating, normalize


def load(name):
    return Polygraph.from_spec(str(files("hka") / "fixtures" / f"{name}.json"))


def main():
    commute = load("srs_commute")
    print("ba => ab terminates:", is_terminating(commute))
    res = normalize(commute, "babba")
    print("  babba normalises to", res.normal_form, "in", len(res.sequence), "steps")
    print("  critical branchings:", critical_branchings(commute))
    print("  fillers needed:", generate_fillers(commute, "critical"))

    overlap = load("srs_overlap")
    print("aba => c, ab => d:")
    for b in critical_branchings(overlap):
        print("  overlap on", overlap.fmt_string(b.source))


if __name__ == "__main__":
    main()
