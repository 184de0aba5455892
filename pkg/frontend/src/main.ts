// Browser entry point: create a session against the serving host and mount.

import { App } from "./app.js";

const httpBase = `${location.protocol}//${location.host}`;
const wsBase = `${location.protocol === "https:" ? "wss" : "ws"}://${location.host}`;

const app = new App({
  httpBase,
  wsBase,
  socketFactory: (url) => new WebSocket(url) as never,
});

app.mount(document.getElementById("app") as HTMLElement);
app.newSession({}).catch((err) => {
  const banner = document.querySelector('[data-testid="error"]');
  if (banner) banner.textContent = String(err);
});
