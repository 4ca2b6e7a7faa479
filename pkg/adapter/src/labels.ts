/**
 * Label map loading: the `item { id: N name: '...' }` block format or plain
 * `id<TAB>name` lines, auto-detected. Ids must be unique and contiguous
 * from 1, names unique.
 */

export type LabelMap = Map<number, string>;

const ITEM_BLOCK = /item\s*\{([^}]*)\}/gs;
const ID_FIELD = /\bid\s*:\s*(\d+)/;
const NAME_FIELD = /\bname\s*:\s*['"]([^'"]+)['"]/;

function validate(entries: Array<[number, string]>): LabelMap {
  if (entries.length === 0) throw new Error("empty label map");
  const ids = entries.map(([id]) => id);
  const names = entries.map(([, name]) => name);
  if (new Set(ids).size !== ids.length) throw new Error("duplicate ids in label map");
  if (new Set(names).size !== names.length) throw new Error("duplicate names in label map");
  const sorted = [...ids].sort((a, b) => a - b);
  sorted.forEach((id, index) => {
    if (id !== index + 1) throw new Error(`label map ids must be contiguous from 1, got ${sorted}`);
  });
  return new Map(entries);
}

export function parseLabelMap(text: string): LabelMap {
  if (text.includes("item") && text.includes("{")) {
    const entries: Array<[number, string]> = [];
    for (const match of text.matchAll(ITEM_BLOCK)) {
      const body = match[1];
      const id = body.match(ID_FIELD);
      const name = body.match(NAME_FIELD);
      if (!id || !name) throw new Error(`item block missing id or name: ${body.trim()}`);
      entries.push([Number(id[1]), name[1]]);
    }
    return validate(entries);
  }
  const entries: Array<[number, string]> = [];
  text.split("\n").forEach((raw, index) => {
    const line = raw.trim();
    if (line.length === 0 || line.startsWith("#")) return;
    const fields = line.split(/\s+/);
    if (fields.length !== 2 || !/^\d+$/.test(fields[0])) {
      throw new Error(`label map line ${index + 1}: expected 'id name', got ${JSON.stringify(line)}`);
    }
    entries.push([Number(fields[0]), fields[1]]);
  });
  return validate(entries);
}
