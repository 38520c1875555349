"""Checks that every SVG written by the acceptance run parses as XML with an <svg> root."""
import pathlib
import sys
import xml.etree.ElementTree as ET

root = pathlib.Path(sys.argv[1])
files = sorted(root.glob("*.svg"))
if not files:
    sys.exit(f"no svg files under {root}")
for path in files:
    tree = ET.parse(path)
    tag = tree.getroot().tag
    if tag != "{http://www.w3.org/2000/svg}svg":
        sys.exit(f"{path}: root element is {tag}")
    print(f"ok {path.name}")
