/** DOM bootstrap: binds the store to the page and wires click handlers. */

import { ApiClient } from "./api.js";
import { QueueStore } from "./store.js";
import { renderApp } from "./views.js";

const REFRESH_MS = 10_000;

export function mount(root: HTMLElement): QueueStore {
  const api = new ApiClient((input, init) => fetch(input, init));
  const params = new URLSearchParams(window.location.search);
  const reviewer = params.get("reviewer") ?? "analyst";
  const store = new QueueStore(api, reviewer);

  const tokenField = document.getElementById("token") as HTMLInputElement | null;
  tokenField?.addEventListener("change", () => {
    api.token = tokenField.value || null;
    void store.refresh();
  });

  const sortToggle = document.getElementById("sort") as HTMLSelectElement | null;
  sortToggle?.addEventListener("change", () => {
    store.setSort(sortToggle.value === "newest-first" ? "newest-first" : "oldest-first");
  });

  store.subscribe((state) => {
    root.innerHTML = renderApp(state);
  });

  root.addEventListener("click", (event) => {
    const target = (event.target as HTMLElement).closest("[data-action]");
    if (!(target instanceof HTMLElement)) return;
    const id = target.dataset.id ?? "";
    switch (target.dataset.action) {
      case "select":
        void store.select(id);
        break;
      case "confirm":
        void store.submitDecision(id, "confirm_phishing");
        break;
      case "benign":
        void store.submitDecision(id, "mark_benign");
        break;
      case "retry":
        void store.refresh();
        break;
      case "dismiss-toast":
        store.dismissToast();
        break;
    }
  });

  void store.refresh();
  window.setInterval(() => void store.refresh(), REFRESH_MS);
  return store;
}

const rootEl = typeof document !== "undefined" ? document.getElementById("app") : null;
if (rootEl) mount(rootEl);
