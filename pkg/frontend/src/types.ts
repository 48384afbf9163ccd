/** Wire types for the layout service's JSON documents. */

export interface GraphNodeDoc {
  id: string;
  nodeType: string;
  width: number;
  height: number;
  algorithm: string;
  approximator: string;
  label?: { text: string; width: number; height: number };
  core?: boolean;
  children?: GraphNodeDoc[];
  edges?: { source: string; target: string }[];
}

export interface LayoutNodeEntry {
  rect: [number, number, number, number];
  childScale: number;
  laidOut: boolean;
  innerSize?: [number, number];
  cumulativeScale?: number;
  absoluteRect?: [number, number, number, number];
}

export interface EdgeEntry {
  owner: string;
  points: [number, number][];
}

export interface LayoutDoc {
  format: string;
  direction: string;
  size: [number, number];
  graph: GraphNodeDoc;
  nodes: Record<string, LayoutNodeEntry>;
  edges: Record<string, EdgeEntry>;
  hierarchyEdges: Record<string, [number, number][]>;
  edgeNotes: Record<string, string>;
}

/** Partial update returned by POST /expand. */
export interface ExpandFragment {
  expanded: string;
  notice: string | null;
  size: [number, number];
  nodes: Record<string, LayoutNodeEntry>;
  edges: Record<string, EdgeEntry>;
  hierarchyEdges: Record<string, [number, number][]>;
  edgeNotes: Record<string, string>;
}

export interface Transport {
  layout(body: {
    direction?: string;
    variant?: string;
    defer?: number;
  }): Promise<LayoutDoc>;
  expand(nodeId: string): Promise<ExpandFragment>;
}
