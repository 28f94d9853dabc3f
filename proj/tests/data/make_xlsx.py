"""Writes bladder_min.xlsx: a small workbook using shared strings, inline strings,
booleans and numbers, stored with deflate."""
import sys
import zipfile
from xml.sax.saxutils import escape

SHEETS = {
    "main": [["key", "value"], ["id", "bladderMin"], ["namespace", "bm"], ["name", "Bladder & urethra"]],
    "materials": [["id", "name", "ontologyTerms"], ["urine", "Urine", "CHEBI:46662"],
                  ["muscle", "Detrusor", "UBERON:0000381"]],
    "lyphs": [["id", "name", "isTemplate", "topology", "layers"],
              ["wall", "Bladder wall", True, "TUBE", "urine,muscle"],
              ["K_77", "Neck", False, "BAG-left", "urine, muscle"]],
    "chains": [["id", "name", "numLevels", "lyphTemplate"], ["tract", "Tract", 3, "wall"]],
    "nodes": [["id", "layout"], ["n1", "1 2 3"]],
}

def col(i):
    s = ""
    i += 1
    while i:
        i, r = divmod(i - 1, 26)
        s = chr(65 + r) + s
    return s

def main(out):
    shared, index = [], {}
    def sid(text):
        if text not in index:
            index[text] = len(shared)
            shared.append(text)
        return index[text]

    sheets = []
    for name, rows in SHEETS.items():
        cells = []
        for r, row in enumerate(rows, start=1):
            xs = []
            for c, v in enumerate(row):
                ref = f"{col(c)}{r}"
                if isinstance(v, bool):
                    xs.append(f'<c r="{ref}" t="b"><v>{int(v)}</v></c>')
                elif isinstance(v, int):
                    xs.append(f'<c r="{ref}"><v>{v}</v></c>')
                elif name == "nodes":
                    xs.append(f'<c r="{ref}" t="inlineStr"><is><t>{escape(v)}</t></is></c>')
                else:
                    xs.append(f'<c r="{ref}" t="s"><v>{sid(v)}</v></c>')
            cells.append(f'<row r="{r}">{"".join(xs)}</row>')
        sheets.append((name, '<?xml version="1.0" encoding="UTF-8"?>'
                       '<worksheet xmlns="http://schemas.openxmlformats.org/spreadsheetml/2006/main">'
                       f'<sheetData>{"".join(cells)}</sheetData></worksheet>'))

    ns = 'xmlns="http://schemas.openxmlformats.org/spreadsheetml/2006/main"'
    rns = 'xmlns:r="http://schemas.openxmlformats.org/officeDocument/2006/relationships"'
    workbook = (f'<?xml version="1.0" encoding="UTF-8"?><workbook {ns} {rns}><sheets>' +
                "".join(f'<sheet name="{n}" sheetId="{i + 1}" r:id="rId{i + 1}"/>' for i, (n, _) in enumerate(sheets)) +
                '</sheets></workbook>')
    rels = ('<?xml version="1.0" encoding="UTF-8"?>'
            '<Relationships xmlns="http://schemas.openxmlformats.org/package/2006/relationships">' +
            "".join(f'<Relationship Id="rId{i + 1}" '
                    'Type="http://schemas.openxmlformats.org/officeDocument/2006/relationships/worksheet" '
                    f'Target="worksheets/sheet{i + 1}.xml"/>' for i in range(len(sheets))) +
            '</Relationships>')
    sst = (f'<?xml version="1.0" encoding="UTF-8"?><sst {ns} count="{len(shared)}" uniqueCount="{len(shared)}">' +
           "".join(f'<si><t>{escape(s)}</t></si>' for s in shared) + '</sst>')
    with zipfile.ZipFile(out, "w", zipfile.ZIP_DEFLATED) as z:
        z.writestr("[Content_Types].xml", '<?xml version="1.0" encoding="UTF-8"?>'
                   '<Types xmlns="http://schemas.openxmlformats.org/package/2006/content-types"/>')
        z.writestr("xl/workbook.xml", workbook)
        z.writestr("xl/_rels/workbook.xml.rels", rels)
        z.writestr("xl/sharedStrings.xml", sst)
        for i, (_, xml) in enumerate(sheets):
            z.writestr(f"xl/worksheets/sheet{i + 1}.xml", xml)

if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "bladder_min.xlsx")
