"""Parses translator output with rdflib as an independent RDF/XML reader."""
import subprocess
import sys
import tempfile
from pathlib import Path

try:
    import rdflib
    from rdflib.namespace import RDF, XSD
except ImportError:
    print("rdflib not installed")
    sys.exit(77)

PASS = rdflib.Namespace("http://www.imi.kit.edu/standard-pass-ont#")


def main(passflow, data):
    failures = []
    with tempfile.TemporaryDirectory() as tmp:
        for bpmn in sorted(Path(data, "bpmn").glob("*.bpmn")):
            out = Path(tmp, bpmn.stem + ".owl")
            subprocess.run([passflow, "translate", str(bpmn), "--to", "owl", "-o", str(out)], check=True)
            g = rdflib.Graph()
            g.parse(out, format="xml")
            for s in set(g.subjects(RDF.type, None)):
                types = [t for t in g.objects(s, RDF.type) if str(t).startswith(str(PASS))]
                if len(types) > 1:
                    failures.append(f"{bpmn.name}: {s} has {len(types)} PASS classes")
            for lit in g.objects(None, PASS.hasDurationTimeOutTime):
                if lit.datatype != XSD.duration:
                    failures.append(f"{bpmn.name}: timer literal {lit!r} is not xsd:duration")
            ids = list(g.objects(None, PASS.hasModelComponentID))
            if len(ids) != len(set(ids)):
                failures.append(f"{bpmn.name}: duplicate component ids")
            print(f"{bpmn.name}: {len(g)} triples")
    for f in failures:
        print("FAIL", f)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1], sys.argv[2]))
