import { Client } from "./api.js";
import { App } from "./app.js";

declare global {
  interface Window {
    LECTUREQG_API?: string;
  }
}

const base = window.LECTUREQG_API ?? "http://127.0.0.1:8000";
const root = document.getElementById("app");
if (root) {
  const app = new App(root, new Client(base));
  void app.tracker.run(app.init());
}
