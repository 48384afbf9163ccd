/** fetch-based transport for the layout service. */

import type { ExpandFragment, LayoutDoc, Transport } from "./types.js";

export class HttpTransport implements Transport {
  constructor(private baseUrl: string = "") {}

  private async post<T>(path: string, body: unknown): Promise<T> {
    const resp = await fetch(this.baseUrl + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!resp.ok) {
      throw new Error(`${path} failed: ${resp.status} ${await resp.text()}`);
    }
    return (await resp.json()) as T;
  }

  layout(body: {
    direction?: string;
    variant?: string;
    defer?: number;
  }): Promise<LayoutDoc> {
    return this.post<LayoutDoc>("/layout", body);
  }

  expand(nodeId: string): Promise<ExpandFragment> {
    return this.post<ExpandFragment>("/expand", { nodeId });
  }
}
